"""Statevector kernel: gates, amplification, marginals, sampling."""

import math

import numpy as np
import pytest

from qbd.errors import CapacityError, DomainError
from qbd.qsim import (
    CircuitPlan,
    CRy,
    PhaseFlip,
    StateVector,
    apply,
    grover_iterate,
    inverse,
    marginal,
    run,
    sample,
    zero_state,
)
from qbd.rng import make_rng


def uniform_plan(q: int) -> CircuitPlan:
    return CircuitPlan(q=q, ops=[CRy(t, math.pi / 2) for t in range(q)])


def random_plan(seed: int, q: int = 4, n_ops: int = 10) -> CircuitPlan:
    rng = make_rng(seed)
    ops = []
    for _ in range(n_ops):
        target = int(rng.integers(q))
        others = [x for x in range(q) if x != target]
        k = int(rng.integers(0, 3))
        controls = tuple(
            (int(c), int(rng.integers(2)))
            for c in rng.choice(others, size=k, replace=False)
        )
        ops.append(CRy(target, float(rng.uniform(0.2, math.pi)), controls))
    return CircuitPlan(q=q, ops=ops)


def test_zero_state_basics():
    assert np.array_equal(zero_state(1).amps, [1, 0])
    assert np.array_equal(zero_state(2).amps, [1, 0, 0, 0])


def test_zero_state_capacity():
    with pytest.raises(CapacityError):
        zero_state(21)
    assert zero_state(21, cap=21).q == 21
    with pytest.raises(DomainError):
        zero_state(0)


def test_ry_splits_amplitude():
    state = zero_state(1)
    apply(state, CRy(0, 2 * math.asin(math.sqrt(0.5))))
    assert np.allclose(state.amps, [math.sqrt(0.5), math.sqrt(0.5)], atol=1e-12)


def test_unsatisfied_control_is_identity():
    state = zero_state(2)
    apply(state, CRy(0, math.pi / 3, controls=((1, 1),)))
    assert np.array_equal(state.amps, [1, 0, 0, 0])


def test_phase_flip_single_index():
    state = run(uniform_plan(2))
    apply(state, PhaseFlip(lambda i: i == 3))
    assert np.allclose(state.amps, [0.5, 0.5, 0.5, -0.5], atol=1e-12)


def test_apply_rejects_bad_indices():
    state = zero_state(2)
    with pytest.raises(DomainError):
        apply(state, CRy(2, 0.1))
    with pytest.raises(DomainError):
        apply(state, CRy(0, 0.1, controls=((0, 1),)))
    with pytest.raises(DomainError):
        apply(state, CRy(0, float("nan")))


def test_run_empty_plan():
    state = run(CircuitPlan(q=2, ops=[]))
    assert np.array_equal(state.amps, [1, 0, 0, 0])


def test_run_ry_pi_flips_to_one():
    state = run(CircuitPlan(q=1, ops=[CRy(0, math.pi)]))
    assert state.amps[1] == pytest.approx(1.0, abs=1e-12)
    assert abs(state.amps[0]) < 1e-12


@pytest.mark.parametrize("seed", range(6))
def test_norm_preserved_by_random_sequences(seed):
    plan = random_plan(seed, n_ops=30)
    state = run(plan)
    apply(state, PhaseFlip(lambda i: (i & 1) == 1))
    assert state.norm_error() <= 1e-9


@pytest.mark.parametrize("seed", range(6))
def test_op_then_inverse_restores_state(seed):
    plan = random_plan(seed)
    state = run(plan)
    before = state.amps.copy()
    extra = random_plan(seed + 100, n_ops=5).ops + [PhaseFlip(lambda i: i % 3 == 0)]
    for op in extra:
        apply(state, op)
    for op in reversed(extra):
        apply(state, inverse(op))
    assert np.max(np.abs(state.amps - before)) <= 1e-12


def test_grover_good_everything_is_identity():
    plan = uniform_plan(2)
    state = run(plan)
    before = state.amps.copy()
    grover_iterate(state, plan, lambda i: True, k=1)
    assert np.max(np.abs(state.amps - before)) <= 1e-12


def test_grover_uniform_single_target_one_iteration():
    plan = uniform_plan(2)
    state = run(plan)
    grover_iterate(state, plan, lambda i: i == 3, k=1)
    assert state.probabilities()[3] == pytest.approx(1.0, abs=1e-12)


def test_grover_zero_iterations_is_noop():
    plan = uniform_plan(3)
    state = run(plan)
    before = state.amps.copy()
    grover_iterate(state, plan, lambda i: i == 0, k=0)
    assert np.array_equal(state.amps, before)


@pytest.mark.parametrize("seed", range(5))
def test_grover_matches_closed_form(seed):
    plan = random_plan(seed)
    base = run(plan)
    rng = make_rng(seed, 3)
    mask = rng.random(base.amps.size) < 0.3
    mask[int(rng.integers(base.amps.size))] = True
    good = lambda i: mask[i]  # noqa: E731
    p_good = float(base.probabilities()[mask].sum())
    theta = 2 * math.asin(math.sqrt(p_good))
    state = base.copy()
    for k in range(6):
        expected = math.sin((2 * k + 1) * theta / 2) ** 2
        measured = float(state.probabilities()[mask].sum())
        assert abs(measured - expected) <= 1e-9, (k, measured, expected)
        grover_iterate(state, plan, good, k=1)


@pytest.mark.parametrize("seed", range(5))
def test_grover_preserves_good_subspace_ratios(seed):
    plan = random_plan(seed, q=4, n_ops=12)
    base = run(plan)
    rng = make_rng(seed, 4)
    mask = rng.random(16) < 0.4
    mask[int(rng.integers(16))] = True
    state = base.copy()
    grover_iterate(state, plan, lambda i: mask[i], k=3)
    before = base.probabilities()[mask]
    after = state.probabilities()[mask]
    assert np.max(np.abs(after / after.sum() - before / before.sum())) <= 1e-9


@pytest.mark.parametrize("seed", range(4))
def test_reflection_paths_agree(seed):
    """Uncompute-based reflection equals reflection about the stored state."""
    plan = random_plan(seed)
    via_plan = run(plan)
    via_state = run(plan)
    reference = run(plan)
    good = lambda i: (i >> 1) & 1 == 1  # noqa: E731
    grover_iterate(via_plan, plan, good, k=2)
    grover_iterate(via_state, reference, good, k=2)
    assert np.max(np.abs(via_plan.amps - via_state.amps)) <= 1e-12


def test_marginal_of_product_state():
    state = StateVector(2, np.array([math.sqrt(0.5), 0, math.sqrt(0.5), 0], dtype=complex))
    dist = marginal(state, [1])
    assert np.allclose(dist.probs, [0.5, 0.5], atol=1e-12)
    dist0 = marginal(state, [0])
    assert np.allclose(dist0.probs, [1.0, 0.0], atol=1e-12)


def test_marginal_over_all_qubits_is_squared_amplitudes():
    plan = random_plan(2)
    state = run(plan)
    dist = marginal(state, range(4))
    assert np.allclose(dist.probs, state.probabilities(), atol=1e-12)


def test_marginal_validates_input():
    state = zero_state(2)
    with pytest.raises(DomainError):
        marginal(state, [])
    with pytest.raises(DomainError):
        marginal(state, [5])


def test_sample_deterministic_state():
    state = run(CircuitPlan(q=1, ops=[CRy(0, math.pi)]))
    counts = sample(state, [0], 100, seed=0)
    assert counts[1] == 100 and counts[0] == 0


def test_sample_frequencies_and_determinism():
    state = run(uniform_plan(1))
    counts = sample(state, [0], 100000, seed=42)
    assert abs(counts[0] / 100000 - 0.5) < 0.01
    assert np.array_equal(counts, sample(state, [0], 100000, seed=42))
    assert not np.array_equal(counts, sample(state, [0], 100000, seed=43))
