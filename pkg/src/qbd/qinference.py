"""Quantum rejection sampling: amplify evidence-consistent mass, then sample.

The iteration count is scheduled from the evidence probability, which is
computed classically from the model (a simulator has it; a hardware
implementation would need quantum counting or a fixed-point schedule).
Residual bad-subspace shots are post-selected away, so estimates stay
unbiased; the integer-iteration mismatch is purely a cost effect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bayesnet import BayesianNetwork, Evidence
from .classical import Distribution, evidence_probability
from .encoder import encode, register_value
from .errors import DomainError, NoSolutionError
from .qsim import DEFAULT_QUBIT_CAP, CircuitPlan, StateVector, grover_iterate, predicate_mask, run, sample


class BitPattern:
    """Basis predicate: masked bits of the index equal a required pattern.

    Works elementwise on numpy index arrays as well as single ints.
    """

    def __init__(self, mask: int, value: int) -> None:
        self.mask = mask
        self.value = value

    def __call__(self, index):
        return (index & self.mask) == self.value


def evidence_predicate(plan: CircuitPlan, evidence: Evidence | dict) -> BitPattern:
    """True iff every evidence variable's register holds its observed value."""
    ev = evidence.as_dict() if isinstance(evidence, Evidence) else dict(evidence)
    mask = 0
    value = 0
    for var, val in ev.items():
        if var not in plan.var_map:
            raise DomainError(f"evidence variable {var} not in the circuit layout")
        r = plan.var_map[var]
        mask |= ((1 << len(r)) - 1) << r.start
        value |= int(val) << r.start
    return BitPattern(mask, value)


class IterationSchedule(NamedTuple):
    k: int
    theta: float
    success: float


def iteration_count(p_good: float) -> IterationSchedule:
    """Integer iterate count for amplifying mass ``p_good``, plus the
    predicted success probability sin^2((2k+1)*theta/2)."""
    if not 0.0 <= p_good <= 1.0:
        raise DomainError(f"probability {p_good} outside [0, 1]")
    if p_good == 0.0:
        raise NoSolutionError("cannot amplify a zero-probability subspace")
    theta = 2.0 * math.asin(math.sqrt(p_good))
    k = max(0, round(math.pi / (2.0 * theta) - 0.5))
    success = math.sin((2 * k + 1) * theta / 2.0) ** 2
    return IterationSchedule(k, theta, success)


@dataclass
class AmplifiedState:
    state: StateVector
    plan: CircuitPlan
    predicate: BitPattern
    p_e: float
    k: int
    theta: float
    predicted_success: float


def amplified_state(net: BayesianNetwork, evidence: Evidence | dict,
                    cap: int = DEFAULT_QUBIT_CAP) -> AmplifiedState:
    """Encoded network state with the evidence subspace amplified."""
    p_e = evidence_probability(net, evidence)
    if p_e <= 0.0:
        raise NoSolutionError("evidence has probability zero")
    schedule = iteration_count(min(p_e, 1.0))
    plan = encode(net, cap)
    state = run(plan, cap)
    predicate = evidence_predicate(plan, evidence)
    grover_iterate(state, plan, predicate, schedule.k)
    return AmplifiedState(state, plan, predicate, p_e, schedule.k, schedule.theta, schedule.success)


@dataclass
class QConditional:
    """Sampled conditional estimate; ``estimate`` is None with zero accepted shots."""

    estimate: Distribution | None
    accepted: int
    rejected: int
    amplified: AmplifiedState


def q_conditional(net: BayesianNetwork, evidence: Evidence | dict, query_var: int,
                  shots: int, seed: int, cap: int = DEFAULT_QUBIT_CAP) -> QConditional:
    """Estimate P(query | evidence) from measurements of the amplified state.

    All qubits are measured; shots landing outside the evidence subspace
    (residual bad mass from the integer iterate count) are discarded.
    """
    if shots <= 0:
        raise DomainError("shots must be positive")
    ev = evidence.as_dict() if isinstance(evidence, Evidence) else dict(evidence)
    if query_var in ev:
        raise DomainError("query variable is fixed by the evidence")
    amp = amplified_state(net, evidence, cap)
    counts = sample(amp.state, range(amp.plan.q), shots, seed)
    dim = counts.size
    idx = np.arange(dim, dtype=np.int64)
    good = predicate_mask(amp.predicate, dim)
    accepted_counts = np.where(good, counts, 0)
    accepted = int(accepted_counts.sum())
    if accepted == 0:
        return QConditional(None, 0, shots, amp)
    values = register_value(amp.plan, query_var, idx)
    arity = net.variables[query_var].arity
    per_value = np.bincount(values, weights=accepted_counts, minlength=1 << len(amp.plan.var_map[query_var]))
    est = Distribution(list(range(arity)), per_value[:arity] / accepted)
    return QConditional(est, accepted, shots - accepted, amp)
