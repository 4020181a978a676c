"""Shared generators and numeric helpers for the test suite."""

from __future__ import annotations

import numpy as np

from qbd.bayesnet import (
    BayesianNetwork,
    Cpt,
    DecisionProblem,
    Evidence,
    UtilityTable,
    Variable,
)
from qbd.classical import forward_sample
from qbd.rng import make_rng


def random_cpt_rows(rng: np.random.Generator, n_rows: int, arity: int) -> np.ndarray:
    """Rows bounded away from zero so sampled evidence keeps usable mass."""
    raw = rng.uniform(0.05, 1.0, size=(n_rows, arity))
    return raw / raw.sum(axis=1, keepdims=True)


def random_network(seed: int, n_vars: int | None = None, max_arity: int = 2,
                   min_vars: int = 2, max_vars: int = 6) -> BayesianNetwork:
    """Random DAG over binary (or small-arity) variables with random CPTs."""
    rng = make_rng(seed)
    if n_vars is None:
        n_vars = int(rng.integers(min_vars, max_vars + 1))
    variables = []
    cpts = []
    for i in range(n_vars):
        arity = int(rng.integers(2, max_arity + 1))
        k = int(rng.integers(0, min(i, 3) + 1))
        parents = tuple(sorted(rng.choice(i, size=k, replace=False).tolist())) if k else ()
        variables.append(Variable(f"v{i}", arity, parents))
        n_rows = 1
        for p in parents:
            n_rows *= variables[p].arity
        cpts.append(Cpt(random_cpt_rows(rng, n_rows, arity)))
    return BayesianNetwork(variables, cpts)


def satisfiable_evidence(seed: int, net: BayesianNetwork, max_evidence: int = 2,
                         exclude: tuple[int, ...] = ()) -> dict[int, int]:
    """Evidence drawn from a forward sample, so its probability is positive."""
    rng = make_rng(seed, 7)
    sample = forward_sample(net, 1, rng)[0]
    candidates = [i for i in range(net.n_vars) if i not in exclude]
    rng.shuffle(candidates)
    n_ev = int(rng.integers(1, min(max_evidence, max(1, len(candidates) - 1)) + 1))
    return {int(i): int(sample[i]) for i in candidates[:n_ev]}


def random_decision_problem(seed: int, max_vars: int = 4, max_arity: int = 4) -> DecisionProblem:
    """A valid decision problem: parentless uniform action (variable 0),
    chance variables unreachable from the action, outcome depending on it."""
    rng = make_rng(seed)
    n_vars = int(rng.integers(2, max_vars + 1))
    arities = [int(rng.integers(2, max_arity + 1)) for _ in range(n_vars)]

    variables = [Variable("act", arities[0])]
    cpts = [Cpt(np.full((1, arities[0]), 1.0 / arities[0]))]
    for i in range(1, n_vars - 1):
        k = int(rng.integers(0, i))  # parents among chance vars only (1..i-1)
        parents = tuple(sorted(rng.choice(range(1, i), size=k, replace=False).tolist())) if k else ()
        variables.append(Variable(f"c{i}", arities[i], parents))
        n_rows = 1
        for p in parents:
            n_rows *= arities[p]
        cpts.append(Cpt(random_cpt_rows(rng, n_rows, arities[i])))

    outcome = n_vars - 1
    chance = list(range(1, outcome))
    extra = []
    if chance:
        k = int(rng.integers(0, min(len(chance), 2) + 1))
        extra = sorted(rng.choice(chance, size=k, replace=False).tolist())
    parents = tuple([0] + extra)
    variables.append(Variable("out", arities[outcome], parents))
    n_rows = 1
    for p in parents:
        n_rows *= arities[p]
    cpts.append(Cpt(random_cpt_rows(rng, n_rows, arities[outcome])))

    net = BayesianNetwork(variables, cpts)
    ev = {}
    if chance and rng.random() < 0.8:
        ev = satisfiable_evidence(seed, net, max_evidence=2,
                                  exclude=tuple([0, outcome]))
    utility = UtilityTable(tuple(rng.uniform(0.1, 10.0, size=arities[outcome]).tolist()))
    return DecisionProblem(net, action_var=0, outcome_var=outcome,
                           evidence=Evidence.from_dict(ev), utility=utility)


def fit_through_origin(x, y) -> tuple[float, float]:
    """Least-squares slope of y = c*x and the uncentered R^2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    c = float(x @ y) / float(x @ x)
    ss_res = float(np.sum((y - c * x) ** 2))
    ss_tot = float(np.sum(y**2))
    return c, 1.0 - ss_res / ss_tot
