"""Exact enumeration, rejection sampling, and expected-utility selection."""

import itertools

import numpy as np
import pytest

from helpers import random_network, satisfiable_evidence
from qbd.bayesnet import (
    BayesianNetwork,
    Cpt,
    DecisionProblem,
    Evidence,
    UtilityTable,
    Variable,
    joint_probability,
)
from qbd.classical import (
    best_action,
    evidence_probability,
    exact_conditional,
    expected_utility,
    full_joint,
    rejection_sample,
)
from qbd.errors import DomainError, ZeroEvidenceError


def test_exact_independent_coin():
    net = BayesianNetwork([Variable("c", 2)], [Cpt([[0.5, 0.5]])])
    dist = exact_conditional(net, 0, {})
    assert np.allclose(dist.probs, [0.5, 0.5])


def test_exact_demo_conditional(demo_problem):
    dist = exact_conditional(demo_problem.network, 2, {0: 0, 1: 0})
    assert np.allclose(dist.probs, [0.7, 0.3], atol=1e-12)


def test_exact_zero_evidence_raises():
    net = BayesianNetwork(
        [Variable("a", 2), Variable("b", 2, parents=(0,))],
        [Cpt([[1.0, 0.0]]), Cpt([[0.5, 0.5], [0.5, 0.5]])],
    )
    with pytest.raises(ZeroEvidenceError):
        exact_conditional(net, 1, {0: 1})  # P(a=1) = 0


def test_exact_rejects_query_in_evidence(demo_problem):
    with pytest.raises(DomainError):
        exact_conditional(demo_problem.network, 0, {0: 0})


@pytest.mark.parametrize("seed", range(12))
def test_exact_agrees_with_bruteforce_products(seed):
    """Enumeration path against independent per-assignment CPT products."""
    net = random_network(seed, max_arity=2, max_vars=6)
    ev = satisfiable_evidence(seed, net)
    query = next(i for i in range(net.n_vars) if i not in ev)
    dist = exact_conditional(net, query, ev)
    shape = [range(v.arity) for v in net.variables]
    totals = np.zeros(net.variables[query].arity)
    for x in itertools.product(*shape):
        if all(x[k] == v for k, v in ev.items()):
            totals[x[query]] += joint_probability(net, x)
    totals /= totals.sum()
    assert np.max(np.abs(dist.probs - totals)) <= 1e-12


def test_full_joint_matches_products(demo_problem):
    net = demo_problem.network
    joint = full_joint(net)
    for x in itertools.product(range(2), repeat=3):
        assert joint[x] == pytest.approx(joint_probability(net, x), abs=1e-15)


def test_rejection_fair_coin():
    net = BayesianNetwork([Variable("c", 2)], [Cpt([[0.5, 0.5]])])
    result = rejection_sample(net, {}, 0, 100000, seed=11)
    assert result.useful == 100000
    assert np.max(np.abs(result.estimate.probs - 0.5)) < 0.01


def test_rejection_demo_close_to_exact(demo_problem):
    net = demo_problem.network
    ev = {0: 0, 1: 0}
    result = rejection_sample(net, ev, 2, 100000, seed=5)
    exact = exact_conditional(net, 2, ev)
    assert result.estimate.tv_distance(exact) < 0.02
    assert 0 < result.useful < result.total


def test_rejection_impossible_evidence():
    net = BayesianNetwork(
        [Variable("a", 2), Variable("b", 2, parents=(0,))],
        [Cpt([[1.0, 0.0]]), Cpt([[0.5, 0.5], [0.5, 0.5]])],
    )
    result = rejection_sample(net, {0: 1}, 1, 1000, seed=0)
    assert result.estimate is None
    assert result.useful == 0
    assert result.total == 1000


@pytest.mark.parametrize("seed", [3, 17, 29])
def test_rejection_convergence_bound(seed):
    """Total variation within 3*sqrt(k/N) of exact for N useful samples."""
    net = random_network(seed, max_arity=2, max_vars=5)
    ev = satisfiable_evidence(seed, net)
    query = next(i for i in range(net.n_vars) if i not in ev)
    result = rejection_sample(net, ev, query, 50000, seed=seed)
    exact = exact_conditional(net, query, ev)
    assert result.estimate is not None
    k = net.variables[query].arity
    assert result.estimate.tv_distance(exact) <= 3.0 * np.sqrt(k / result.useful)


def test_rejection_determinism(demo_problem):
    a = rejection_sample(demo_problem.network, {0: 0}, 2, 2000, seed=9)
    b = rejection_sample(demo_problem.network, {0: 0}, 2, 2000, seed=9)
    assert a.useful == b.useful
    assert np.array_equal(a.estimate.probs, b.estimate.probs)


def test_expected_utility_constant_is_constant(demo_problem):
    flat = DecisionProblem(demo_problem.network, demo_problem.action_var,
                           demo_problem.outcome_var, demo_problem.evidence,
                           UtilityTable((4.0, 4.0)))
    assert expected_utility(flat, 0) == pytest.approx(4.0, abs=1e-12)
    assert expected_utility(flat, 1) == pytest.approx(4.0, abs=1e-12)


def test_expected_utility_demo_values(demo_problem):
    assert expected_utility(demo_problem, 0) == pytest.approx(5.8, abs=1e-12)
    assert expected_utility(demo_problem, 1) == pytest.approx(4.2, abs=1e-12)


def test_best_action_demo(demo_problem):
    report = best_action(demo_problem)
    assert report.best_action == 0
    assert np.allclose(report.expected_utilities, [5.8, 4.2], atol=1e-12)


def test_best_action_tie_takes_lowest_index(demo_problem):
    net = demo_problem.network
    tied = BayesianNetwork(
        net.variables,
        [net.cpts[0], net.cpts[1], Cpt([[0.7, 0.3], [0.7, 0.3], [0.5, 0.5], [0.5, 0.5]])],
    )
    problem = DecisionProblem(tied, 1, 2, demo_problem.evidence, demo_problem.utility)
    report = best_action(problem)
    assert report.best_action == 0
    assert report.expected_utilities[0] == pytest.approx(report.expected_utilities[1])


def test_utility_shift_leaves_argmax(demo_problem):
    base = best_action(demo_problem)
    shifted_problem = DecisionProblem(
        demo_problem.network, demo_problem.action_var, demo_problem.outcome_var,
        demo_problem.evidence, UtilityTable((7.0 + 2.5, 3.0 + 2.5)),
    )
    shifted = best_action(shifted_problem)
    assert shifted.best_action == base.best_action
    assert np.allclose(shifted.expected_utilities, base.expected_utilities + 2.5, atol=1e-12)


def test_evidence_probability_demo(demo_problem):
    assert evidence_probability(demo_problem.network, demo_problem.evidence) == pytest.approx(0.25)
