"""Closed-form operation-count model for both decision processes.

Totals multiply three factors: the encoding term n*2^m, the amplification
iterates per sample, and the multinomial sample count A*pi*(1-pi)/delta^2;
Process B additionally repeats per action and pays 2*(N_a+N_r) classical
combination steps. The model is analytic and decoupled from wall-clock
benchmarking; ``empirical_cost_audit`` bridges to measured counts.

Conventions: the chi-square percentile is replaced by its lower bound
k + 2*ln(1/alpha) - 5/2 (natural log), evaluated at the action-category
degrees of freedom N_a - 1 for both processes, and the category probability
pi defaults to the worst case 1/2. Process B's per-action error is derived
from the target action-level error through delta_a = (sqrt(N_r)/N_a)*delta_b
unless an explicit per-action delta is supplied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bayesnet import DecisionProblem
from .classical import evidence_probability, rejection_sample
from .errors import DomainError
from .qdecision import process_a_state
from .qinference import amplified_state, iteration_count
from .qsim import predicate_mask, sample


@dataclass
class CostEstimate:
    process: str  # "a" | "b"
    iterations_per_sample: float
    samples: float
    encoding_ops: float
    additive_ops: float
    total_ops: float
    params: dict


def iterations_a(n_r: int, p_e: float) -> float:
    """Mean amplification iterates per Process A sample: sqrt(N_r/P(e))."""
    if n_r < 1:
        raise DomainError("N_r must be >= 1")
    if not 0.0 < p_e <= 1.0:
        raise DomainError("P(e) must be in (0, 1]")
    return math.sqrt(n_r / p_e)


def iterations_b(n_a: int, p_e: float) -> float:
    """Mean iterates per Process B sample: sqrt(N_a/P(e)), from P(e,a) = P(e)/N_a."""
    if n_a < 1:
        raise DomainError("N_a must be >= 1")
    if not 0.0 < p_e <= 1.0:
        raise DomainError("P(e) must be in (0, 1]")
    return math.sqrt(n_a / p_e)


def samples_needed(a: float, pi: float, delta: float) -> float:
    """Multinomial simultaneous-error sample count A*pi*(1-pi)/delta^2."""
    if a <= 0:
        raise DomainError("chi-square percentile must be positive")
    if delta <= 0:
        raise DomainError("error term must be positive")
    if not 0.0 <= pi <= 1.0:
        raise DomainError("category probability outside [0, 1]")
    if pi in (0.0, 1.0):
        return 0.0  # degenerate category carries no sampling error
    return a * pi * (1.0 - pi) / delta**2


def chi_square_lower_bound(k: int, alpha: float) -> float:
    """Lower bound k + 2*ln(1/alpha) - 5/2 for the upper alpha percentile."""
    return k + 2.0 * math.log(1.0 / alpha) - 2.5


def delta_b_from_a(delta_a: float, n_a: int, n_r: int) -> float:
    """Per-action error that propagates to an action-level error delta_a."""
    return delta_a * n_a / math.sqrt(n_r)


def delta_a_from_b(delta_b: float, n_a: int, n_r: int) -> float:
    """Action-level error induced by per-action errors delta_b."""
    return delta_b * math.sqrt(n_r) / n_a


def total_ops(process: str, n: int, m: int, n_a: int, n_r: int, p_e: float,
              delta: float, alpha: float, pi: float = 0.5,
              delta_b: float | None = None) -> CostEstimate:
    """Evaluate the operation-count formula for one process.

    ``delta`` is the target error on the action distribution. For Process B
    the per-action error defaults to the propagated delta*N_a/sqrt(N_r);
    pass ``delta_b`` to cost B at an explicit per-action error instead.
    """
    if n < 1 or m < 0 or n_a < 1 or n_r < 1:
        raise DomainError("n, N_a, N_r must be >= 1 and m >= 0")
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must be in (0, 1)")
    a_val = chi_square_lower_bound(max(n_a - 1, 1), alpha)
    if a_val <= 0:
        raise DomainError(f"chi-square bound {a_val:.3g} is not positive at these parameters")
    encoding = n * 2**m
    params = dict(n=n, m=m, n_a=n_a, n_r=n_r, p_e=p_e, delta=delta, alpha=alpha, pi=pi)
    if process == "a":
        iters = iterations_a(n_r, p_e)
        samples = samples_needed(a_val, pi, delta)
        return CostEstimate("a", iters, samples, encoding, 0.0,
                            encoding * iters * samples, params)
    if process == "b":
        eff_delta = delta_b if delta_b is not None else delta_b_from_a(delta, n_a, n_r)
        params["delta_b"] = eff_delta
        iters = iterations_b(n_a, p_e)
        samples = samples_needed(a_val, pi, eff_delta)
        additive = 2.0 * (n_a + n_r)
        return CostEstimate("b", iters, samples, encoding, additive,
                            encoding * iters * samples * n_a + additive, params)
    raise DomainError(f"unknown process {process!r}")


def ratio_bound(n_r: int, n_a: int) -> float:
    """Asymptotic lower bound sqrt(N_r/N_a) on the Process B / Process A ratio."""
    if n_r < 1 or n_a < 1:
        raise DomainError("dimensions must be >= 1")
    return math.sqrt(n_r / n_a)


@dataclass
class RatioCheck:
    ratio: float
    bound: float
    satisfied: bool
    process_a: CostEstimate
    process_b: CostEstimate


def ratio_check(n: int, m: int, n_a: int, n_r: int, p_e: float, delta_a: float,
                alpha: float, pi: float = 0.5) -> RatioCheck:
    """Process B / Process A cost ratio against its sqrt(N_r/N_a) bound.

    Uses the error-propagation substitution for B's per-action error, so the
    percentile and category factors cancel and the ratio exceeds the bound by
    exactly the (positive) share of B's classical combination ops.
    """
    est_a = total_ops("a", n, m, n_a, n_r, p_e, delta_a, alpha, pi)
    est_b = total_ops("b", n, m, n_a, n_r, p_e, delta_a, alpha, pi)
    ratio = est_b.total_ops / est_a.total_ops
    bound = ratio_bound(n_r, n_a)
    return RatioCheck(ratio, bound, ratio >= bound, est_a, est_b)


@dataclass
class CostAudit:
    """Scheduled vs executed counts for one decision problem."""

    p_e: float
    k1_predicted: int
    k1_executed: int
    k2_predicted: int
    k2_executed: int
    rejection_samples: int
    rejection_accepted: int
    rejection_acceptance: float
    shots: int
    match_fraction: float
    match_predicted: float

    def rows(self) -> list[tuple[str, float, float]]:
        return [
            ("stage-1 iterations", self.k1_predicted, self.k1_executed),
            ("stage-2 iterations", self.k2_predicted, self.k2_executed),
            ("rejection acceptance", self.p_e, self.rejection_acceptance),
            ("matched-shot fraction", self.match_predicted, self.match_fraction),
        ]


def empirical_cost_audit(problem: DecisionProblem, seed: int, shots: int = 4096,
                         rejection_samples: int = 20000) -> CostAudit:
    """Instrument actual runs and report predicted-vs-measured counts.

    Iteration counts are read back from the executed pipelines and compared
    with the schedule recomputed from the model; the informative part is the
    shot-level comparison of acceptance fractions against the model.
    """
    net = problem.network
    amp = amplified_state(net, problem.evidence)
    k1_predicted = iteration_count(min(amp.p_e, 1.0)).k

    pa = process_a_state(problem)
    k2_predicted = iteration_count(min(pa.good_mass, 1.0)).k

    rej = rejection_sample(net, problem.evidence, problem.outcome_var,
                           rejection_samples, seed)
    p_e = evidence_probability(net, problem.evidence)

    counts = sample(pa.state, range(pa.plan.q), shots, (seed, 1))
    matched = int(np.where(predicate_mask(pa.match, counts.size), counts, 0).sum())

    return CostAudit(
        p_e=p_e,
        k1_predicted=k1_predicted,
        k1_executed=amp.k,
        k2_predicted=k2_predicted,
        k2_executed=pa.k2,
        rejection_samples=rej.total,
        rejection_accepted=rej.useful,
        rejection_acceptance=rej.useful / rej.total,
        shots=shots,
        match_fraction=matched / shots,
        match_predicted=pa.match_mass,
    )
