"""Action selection on the simulator.

Process A entangles a utility register with the evidence-amplified network
state and amplifies the register-match subspace; the action register's
conditional marginal is then proportional to expected utility, so a single
measurement draws an action with probability EU(a)/sum EU. Process B runs
one amplified inference per action and combines the estimated outcome
distribution with the utilities classically. A classical reference path
reports the same quantities from the exact oracle.

Measurement statistics are always conditioned on the match predicate
(exact mode) or post-selected on it (shot mode), which removes the
integer-iteration bias of amplitude amplification from the results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bayesnet import DecisionProblem, UtilityTable, Violation, ensure_valid_problem
from .classical import Distribution, best_action
from .errors import DegenerateUtilityError, DomainError, EstimateUnavailableError
from .qinference import BitPattern, amplified_state, iteration_count, q_conditional
from .qsim import DEFAULT_QUBIT_CAP, CircuitPlan, StateVector, grover_iterate, predicate_mask, sample


@dataclass
class DecisionReport:
    """What a decision run produced, for any of the three processes."""

    process: str  # "a" | "b" | "classical"
    action_distribution: Distribution
    chosen_action: int
    shots_used: int
    matched_shot_fraction: float
    theoretical_distribution: Distribution
    expected_utilities: np.ndarray | None = None
    classical_ops: int | None = None
    violations: list[Violation] | None = None


class RegisterMatch:
    """True iff the outcome and utility registers agree and evidence bits hold."""

    def __init__(self, outcome_shift: int, utility_shift: int, width: int,
                 evidence: BitPattern) -> None:
        self.outcome_shift = outcome_shift
        self.utility_shift = utility_shift
        self.width_mask = (1 << width) - 1
        self.evidence = evidence

    def __call__(self, index):
        same = ((index >> self.outcome_shift) & self.width_mask) == (
            (index >> self.utility_shift) & self.width_mask
        )
        return same & self.evidence(index)


def utility_state(utility: UtilityTable) -> np.ndarray:
    """Amplitudes sqrt(U(r)/sum U) over the utility register, padded with zeros."""
    u = utility.as_array()
    total = float(u.sum())
    if total <= 0.0:
        raise DomainError("utility table must have positive total weight")
    width = max(1, math.ceil(math.log2(u.size)))
    amps = np.zeros(1 << width)
    amps[: u.size] = np.sqrt(u / total)
    return amps


def shift_nonnegative(values) -> UtilityTable:
    """Affine pre-shift U - min(U) for tables with negative entries.

    The shift preserves the classical argmax but changes the shape of the
    action distribution Process A samples from; use it only when the
    relative sampling probabilities do not matter.
    """
    u = np.asarray(values, dtype=float)
    if u.min() < 0:
        u = u - u.min()
    return UtilityTable(tuple(float(x) for x in u))


@dataclass
class ProcessAState:
    state: StateVector
    plan: CircuitPlan
    utility_qubits: range
    match: RegisterMatch
    p_e: float
    k1: int
    theta1: float
    stage1_success: float
    good_mass: float
    k2: int
    theta2: float
    stage2_predicted: float
    match_mass: float


def process_a_state(problem: DecisionProblem, cap: int = DEFAULT_QUBIT_CAP) -> ProcessAState:
    """Run the full pipeline: amplify evidence, entangle utilities, amplify matches."""
    net = problem.network
    amp = amplified_state(net, problem.evidence, cap)

    u_amps = utility_state(problem.utility)
    width = int(math.log2(u_amps.size))
    q2 = amp.plan.q + width
    if q2 > cap:
        raise DomainError(f"utility register pushes the state to {q2} qubits, cap is {cap}")
    combined = StateVector(q2, np.kron(u_amps.astype(np.complex128), amp.state.amps))
    plan = CircuitPlan(q=q2, ops=amp.plan.ops, var_map=dict(amp.plan.var_map))
    utility_qubits = range(amp.plan.q, q2)

    outcome_range = plan.var_map[problem.outcome_var]
    match = RegisterMatch(outcome_range.start, utility_qubits.start, width, amp.predicate)
    mask = predicate_mask(match, combined.amps.size)
    good_mass = float(combined.probabilities()[mask].sum())
    if good_mass <= 0.0:
        raise DegenerateUtilityError("utility-weighted evidence subspace has zero mass")

    reference = combined.copy()
    schedule = iteration_count(min(good_mass, 1.0))
    grover_iterate(combined, reference, match, schedule.k)
    match_mass = float(combined.probabilities()[mask].sum())
    return ProcessAState(
        state=combined,
        plan=plan,
        utility_qubits=utility_qubits,
        match=match,
        p_e=amp.p_e,
        k1=amp.k,
        theta1=amp.theta,
        stage1_success=amp.predicted_success,
        good_mass=good_mass,
        k2=schedule.k,
        theta2=schedule.theta,
        stage2_predicted=schedule.success,
        match_mass=match_mass,
    )


@dataclass
class ActionEstimate:
    distribution: Distribution
    shots_used: int
    matched_fraction: float


def action_distribution(pa: ProcessAState, problem: DecisionProblem,
                        shots: int | None = None, seed=0) -> ActionEstimate:
    """Action marginal conditioned on the match predicate.

    Exact mode (``shots`` None) renormalizes within the matched subspace of
    the statevector; shot mode samples every qubit and keeps matched shots.
    """
    action_range = pa.plan.var_map[problem.action_var]
    n_actions = problem.network.variables[problem.action_var].arity
    dim = pa.state.amps.size
    idx = np.arange(dim, dtype=np.int64)
    matched = predicate_mask(pa.match, dim)
    action_values = (idx >> action_range.start) & ((1 << len(action_range)) - 1)

    if shots is None:
        weights = np.where(matched, pa.state.probabilities(), 0.0)
        total = float(weights.sum())
        per_action = np.bincount(action_values, weights=weights, minlength=1 << len(action_range))
        return ActionEstimate(
            Distribution(list(range(n_actions)), per_action[:n_actions] / total),
            0,
            total,
        )

    counts = sample(pa.state, range(pa.plan.q), shots, seed)
    kept = np.where(matched, counts, 0)
    accepted = int(kept.sum())
    if accepted == 0:
        raise EstimateUnavailableError("no shot landed in the matched subspace")
    per_action = np.bincount(action_values, weights=kept, minlength=1 << len(action_range))
    return ActionEstimate(
        Distribution(list(range(n_actions)), per_action[:n_actions] / accepted),
        shots,
        accepted / shots,
    )


def decide_process_a(problem: DecisionProblem, shots: int | None = None, seed=0,
                     force: bool = False, cap: int = DEFAULT_QUBIT_CAP) -> DecisionReport:
    """Decide by measuring the utility-entangled state's action register."""
    violations = ensure_valid_problem(problem, force=force, qubit_cap=cap)
    pa = process_a_state(problem, cap)
    exact = action_distribution(pa, problem)
    if shots is None:
        est = exact
    else:
        est = action_distribution(pa, problem, shots=shots, seed=seed)
    return DecisionReport(
        process="a",
        action_distribution=est.distribution,
        chosen_action=est.distribution.argmax(),
        shots_used=est.shots_used,
        matched_shot_fraction=est.matched_fraction,
        theoretical_distribution=exact.distribution,
        violations=violations or None,
    )


def decide_process_b(problem: DecisionProblem, shots_per_estimate: int, seed=0,
                     force: bool = False, cap: int = DEFAULT_QUBIT_CAP) -> DecisionReport:
    """Decide by estimating P(outcome | action, evidence) once per action.

    Each action runs its own amplified inference (evidence extended with the
    pinned action value); utilities are combined classically, which costs the
    reported 2*(N_a + N_r) extra operations.
    """
    if shots_per_estimate <= 0:
        raise DomainError("shots_per_estimate must be positive")
    violations = ensure_valid_problem(problem, force=force, qubit_cap=cap)
    net = problem.network
    u = problem.utility.as_array()
    n_actions = net.variables[problem.action_var].arity
    n_outcomes = net.variables[problem.outcome_var].arity

    eus = np.zeros(n_actions)
    accepted = 0
    for a in range(n_actions):
        ev = problem.evidence.as_dict()
        ev[problem.action_var] = a
        result = q_conditional(net, ev, problem.outcome_var, shots_per_estimate,
                               (seed, a) if isinstance(seed, int) else tuple(seed) + (a,), cap)
        if result.estimate is None:
            raise EstimateUnavailableError(f"no accepted shots for action {a}")
        accepted += result.accepted
        eus[a] = float(result.estimate.probs @ u)

    total = float(eus.sum())
    if total <= 0.0:
        raise DegenerateUtilityError("estimated expected utilities are all zero")
    exact = best_action(problem)
    exact_total = float(exact.expected_utilities.sum())
    return DecisionReport(
        process="b",
        action_distribution=Distribution(list(range(n_actions)), eus / total),
        chosen_action=int(np.argmax(eus)),
        shots_used=n_actions * shots_per_estimate,
        matched_shot_fraction=accepted / (n_actions * shots_per_estimate),
        theoretical_distribution=Distribution(list(range(n_actions)),
                                              exact.expected_utilities / exact_total),
        expected_utilities=eus,
        classical_ops=2 * (n_actions + n_outcomes),
        violations=violations or None,
    )


def decide_classical(problem: DecisionProblem, force: bool = False) -> DecisionReport:
    """Exact-oracle decision with the same report shape as the quantum paths."""
    violations = ensure_valid_problem(problem, force=force)
    report = best_action(problem)
    total = float(report.expected_utilities.sum())
    if total <= 0.0:
        raise DegenerateUtilityError("expected utilities are all zero")
    dist = Distribution(list(range(report.expected_utilities.size)),
                        report.expected_utilities / total)
    return DecisionReport(
        process="classical",
        action_distribution=dist,
        chosen_action=report.best_action,
        shots_used=0,
        matched_shot_fraction=1.0,
        theoretical_distribution=dist,
        expected_utilities=report.expected_utilities,
        violations=violations or None,
    )
