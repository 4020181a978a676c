"""Dense statevector simulator.

The gate set is exactly what the encoding and amplification circuits need:
multi-controlled Y-rotations, diagonal phase oracles over a basis predicate,
and the amplitude-amplification iterate built from reflection-via-uncompute.
Qubit 0 is the least significant bit of a basis index, and Ry follows
``Ry(theta)|0> = cos(theta/2)|0> + sin(theta/2)|1>``, so probability p of
value 1 needs ``theta = 2*arcsin(sqrt(p))``.

Amplitudes stay non-negative reals for every circuit this package compiles,
but the kernel works on complex vectors and never renormalizes: norm
preservation is a checked invariant, not a fixup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .classical import Distribution
from .errors import CapacityError, DomainError
from .rng import as_rng

DEFAULT_QUBIT_CAP = 20


@dataclass
class StateVector:
    """2**q complex amplitudes; unit norm is an invariant, not enforced here."""

    q: int
    amps: np.ndarray

    def copy(self) -> "StateVector":
        return StateVector(self.q, self.amps.copy())

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def norm_error(self) -> float:
        return abs(float(np.sum(np.abs(self.amps) ** 2)) - 1.0)


@dataclass(frozen=True)
class CRy:
    """Y-rotation on ``target`` applied where every control qubit holds its bit.

    An empty control list is a plain Ry.
    """

    target: int
    angle: float
    controls: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class PhaseFlip:
    """Negate the amplitude of every basis state the predicate accepts."""

    predicate: Callable[[int], bool]


GateOp = Union[CRy, PhaseFlip]


@dataclass
class CircuitPlan:
    """Ordered gate list plus the variable -> qubit-range layout."""

    q: int
    ops: list = field(default_factory=list)
    var_map: dict[int, range] = field(default_factory=dict)


def zero_state(q: int, cap: int = DEFAULT_QUBIT_CAP) -> StateVector:
    if q < 1:
        raise DomainError(f"need at least 1 qubit, got {q}")
    if q > cap:
        raise CapacityError(f"{q} qubits exceeds the cap of {cap}")
    amps = np.zeros(1 << q, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(q, amps)


def inverse(op: GateOp) -> GateOp:
    """Exact inverse: negated angle for CRy, phase flips are involutions."""
    if isinstance(op, CRy):
        return CRy(op.target, -op.angle, op.controls)
    return op


def predicate_mask(pred: Callable[[int], bool], dim: int) -> np.ndarray:
    """Boolean mask of accepted basis indices.

    Predicates written with plain bit arithmetic evaluate vectorized over an
    index array; anything else falls back to per-index calls.
    """
    idx = np.arange(dim, dtype=np.int64)
    try:
        out = np.asarray(pred(idx))
    except Exception:
        out = None
    if out is not None and out.shape == (dim,):
        return out.astype(bool)
    return np.fromiter((bool(pred(i)) for i in range(dim)), dtype=bool, count=dim)


def apply(state: StateVector, op: GateOp) -> StateVector:
    """Apply one gate in place and return the state."""
    dim = state.amps.size
    if isinstance(op, CRy):
        if not 0 <= op.target < state.q:
            raise DomainError(f"target qubit {op.target} out of range for {state.q} qubits")
        if not math.isfinite(op.angle):
            raise DomainError("rotation angle must be finite")
        idx = np.arange(dim, dtype=np.int64)
        sel = ((idx >> op.target) & 1) == 0
        for cq, bit in op.controls:
            if not 0 <= cq < state.q:
                raise DomainError(f"control qubit {cq} out of range for {state.q} qubits")
            if cq == op.target:
                raise DomainError("control and target qubits coincide")
            sel &= ((idx >> cq) & 1) == bit
        i0 = idx[sel]
        i1 = i0 | (1 << op.target)
        c, s = math.cos(op.angle / 2), math.sin(op.angle / 2)
        a0 = state.amps[i0]
        a1 = state.amps[i1]
        state.amps[i0] = c * a0 - s * a1
        state.amps[i1] = s * a0 + c * a1
    elif isinstance(op, PhaseFlip):
        mask = predicate_mask(op.predicate, dim)
        state.amps[mask] = -state.amps[mask]
    else:
        raise DomainError(f"unknown gate op {op!r}")
    return state


def run(plan: CircuitPlan, cap: int = DEFAULT_QUBIT_CAP) -> StateVector:
    """Fold the plan's gates over the all-zeros state."""
    state = zero_state(plan.q, cap)
    for op in plan.ops:
        apply(state, op)
    return state


def _reflect(state: StateVector, prep: CircuitPlan | StateVector) -> None:
    """Apply -(2|psi><psi| - I) for |psi> described by ``prep``.

    A CircuitPlan uncomputes to |0>, negates the |0> component, and
    recomputes; a StateVector reference applies the same operator directly,
    which is what stage-2 amplification needs when its initial state is not
    a bare plan.
    """
    if isinstance(prep, StateVector):
        ref = prep.amps
        overlap = np.vdot(ref, state.amps)
        state.amps = state.amps - 2.0 * overlap * ref
        return
    for op in reversed(prep.ops):
        apply(state, inverse(op))
    state.amps[0] = -state.amps[0]
    for op in prep.ops:
        apply(state, op)


def grover_iterate(state: StateVector, prep: CircuitPlan | StateVector,
                   good: Callable[[int], bool], k: int) -> StateVector:
    """k amplitude-amplification iterates toward the good subspace.

    Each iterate is Q = -(reflection about the prepared state) composed with
    a phase flip on the good basis states. Starting from the prepared state,
    the good-subspace mass after k iterates is sin^2((2k+1)*theta/2) with
    theta = 2*arcsin(sqrt(P(good))).
    """
    if k < 0:
        raise DomainError("iteration count must be >= 0")
    mask = predicate_mask(good, state.amps.size)
    for _ in range(k):
        state.amps[mask] = -state.amps[mask]
        _reflect(state, prep)
    return state


def marginal(state: StateVector, qubits) -> Distribution:
    """Distribution of the value read from the listed qubits.

    The first listed qubit is the least significant bit of the value.
    """
    qubits = list(qubits)
    if not qubits:
        raise DomainError("marginal needs at least one qubit")
    for q in qubits:
        if not 0 <= q < state.q:
            raise DomainError(f"qubit {q} out of range for {state.q} qubits")
    dim = state.amps.size
    idx = np.arange(dim, dtype=np.int64)
    val = np.zeros(dim, dtype=np.int64)
    for j, q in enumerate(qubits):
        val |= ((idx >> q) & 1) << j
    size = 1 << len(qubits)
    probs = np.bincount(val, weights=state.probabilities(), minlength=size)
    return Distribution(list(range(size)), probs)


def sample(state: StateVector, qubits, shots: int, seed) -> np.ndarray:
    """i.i.d. measurement counts over the subset's values; deterministic per seed.

    ``seed`` may be an int or a (seed, *stream) tuple for derived substreams.
    """
    if shots <= 0:
        raise DomainError("shots must be positive")
    dist = marginal(state, qubits)
    probs = dist.probs / dist.probs.sum()  # absorb 1e-12-level norm drift
    rng = as_rng(seed)
    values = rng.choice(probs.size, size=shots, p=probs)
    return np.bincount(values, minlength=probs.size)
