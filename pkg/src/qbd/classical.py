"""Exact and sampling-based classical inference.

Everything here is ground truth for the simulator-side results: exact
conditionals by full enumeration over the joint, forward rejection sampling,
and expected-utility action selection. Enumeration is deliberate; networks
at simulator scale (<= 20 qubits) make it trivially correct.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bayesnet import BayesianNetwork, DecisionProblem, Evidence
from .errors import DomainError, ZeroEvidenceError
from .rng import make_rng


@dataclass
class Distribution:
    """Probabilities over an explicit support."""

    support: list
    probs: np.ndarray

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float)

    def prob(self, value) -> float:
        return float(self.probs[self.support.index(value)])

    def tv_distance(self, other: "Distribution") -> float:
        return 0.5 * float(np.abs(self.probs - other.probs).sum())

    def argmax(self) -> int:
        """Index of the most probable support entry, lowest index on ties."""
        return int(np.argmax(self.probs))

    def as_dict(self) -> dict:
        return {v: float(p) for v, p in zip(self.support, self.probs)}


@dataclass
class EuReport:
    """Per-action expected utilities with the argmax choice."""

    expected_utilities: np.ndarray
    best_action: int
    deltas: np.ndarray = field(default=None)

    def __post_init__(self):
        self.expected_utilities = np.asarray(self.expected_utilities, dtype=float)
        if self.deltas is None:
            self.deltas = np.zeros_like(self.expected_utilities)


@dataclass
class RejectionEstimate:
    """Result of rejection sampling; ``estimate`` is None when no sample survived."""

    estimate: Distribution | None
    useful: int
    total: int


def full_joint(net: BayesianNetwork) -> np.ndarray:
    """Joint distribution as an array of shape (arity_0, ..., arity_{n-1})."""
    shape = net.arities()
    grids = np.indices(shape)
    probs = np.ones(shape)
    for i, v in enumerate(net.variables):
        row = np.zeros(shape, dtype=np.intp)
        for p in v.parents:
            row = row * net.variables[p].arity + grids[p]
        probs = probs * net.cpts[i].rows[row, grids[i]]
    return probs


def evidence_probability(net: BayesianNetwork, evidence: Evidence | dict) -> float:
    ev = evidence.as_dict() if isinstance(evidence, Evidence) else dict(evidence)
    joint = full_joint(net)
    idx: list = [slice(None)] * net.n_vars
    for var, val in ev.items():
        idx[var] = val
    return float(np.asarray(joint[tuple(idx)]).sum())


def exact_conditional(net: BayesianNetwork, query_var: int, evidence: Evidence | dict) -> Distribution:
    """P(query | evidence) by summing the joint over all unassigned variables."""
    ev = evidence.as_dict() if isinstance(evidence, Evidence) else dict(evidence)
    if query_var in ev:
        raise DomainError("query variable is fixed by the evidence")
    joint = full_joint(net)
    idx: list = [slice(None)] * net.n_vars
    for var, val in ev.items():
        if not 0 <= val < net.variables[var].arity:
            raise DomainError(f"evidence value {val} out of range for variable {var}")
        idx[var] = val
    sub = np.asarray(joint[tuple(idx)])
    p_e = float(sub.sum())
    if p_e <= 0.0:
        raise ZeroEvidenceError("evidence has probability zero")
    free = [i for i in range(net.n_vars) if i not in ev]
    axis = free.index(query_var)
    marg = sub.sum(axis=tuple(a for a in range(sub.ndim) if a != axis))
    return Distribution(list(range(net.variables[query_var].arity)), marg / p_e)


def forward_sample(net: BayesianNetwork, n_samples: int, rng: np.random.Generator) -> np.ndarray:
    """Ancestral samples, one row per sample, one column per variable."""
    out = np.empty((n_samples, net.n_vars), dtype=np.intp)
    for i, v in enumerate(net.variables):
        rows = np.zeros(n_samples, dtype=np.intp)
        for p in v.parents:
            rows = rows * net.variables[p].arity + out[:, p]
        cum = np.cumsum(net.cpts[i].rows[rows], axis=1)
        u = rng.random(n_samples)
        out[:, i] = (cum < u[:, None]).sum(axis=1)
    return out


def rejection_sample(net: BayesianNetwork, evidence: Evidence | dict, target_var: int,
                     n_samples: int, seed: int) -> RejectionEstimate:
    """Forward-sample, discard evidence mismatches, estimate P(target | evidence).

    Returns the ratio estimate together with the useful-sample count; the
    estimate is None when every sample was rejected.
    """
    if n_samples <= 0:
        raise DomainError("n_samples must be positive")
    ev = evidence.as_dict() if isinstance(evidence, Evidence) else dict(evidence)
    samples = forward_sample(net, n_samples, make_rng(seed))
    keep = np.ones(n_samples, dtype=bool)
    for var, val in ev.items():
        keep &= samples[:, var] == val
    useful = int(keep.sum())
    if useful == 0:
        return RejectionEstimate(None, 0, n_samples)
    arity = net.variables[target_var].arity
    counts = np.bincount(samples[keep, target_var], minlength=arity).astype(float)
    return RejectionEstimate(Distribution(list(range(arity)), counts / useful), useful, n_samples)


def expected_utility(problem: DecisionProblem, action_value: int) -> float:
    """Sum over outcomes of P(outcome | action, evidence) times utility."""
    net = problem.network
    if problem.action_var is None or problem.outcome_var is None or problem.utility is None:
        raise DomainError("problem lacks decision roles (action/outcome/utility)")
    if not 0 <= action_value < net.variables[problem.action_var].arity:
        raise DomainError(f"action value {action_value} out of range")
    ev = problem.evidence.as_dict()
    ev[problem.action_var] = action_value
    dist = exact_conditional(net, problem.outcome_var, ev)
    return float(dist.probs @ problem.utility.as_array())


def best_action(problem: DecisionProblem) -> EuReport:
    """Expected utility of every action; argmax with lowest-index tie-break."""
    n_actions = problem.network.variables[problem.action_var].arity
    eus = np.array([expected_utility(problem, a) for a in range(n_actions)])
    return EuReport(eus, int(np.argmax(eus)))
