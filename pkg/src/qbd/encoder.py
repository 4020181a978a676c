"""Compile a Bayesian network into a state-preparation circuit.

Each variable gets a contiguous qubit range (value bit 0 at the range
start). For every CPT row one block of controlled rotations is emitted,
with all parent qubits as controls at that row's bit pattern; multi-qubit
variables use a binary-subdivision cascade, rotating each qubit from the
most significant down, conditioned on the variable's own higher qubits.
Squared amplitudes of the resulting state equal the joint probabilities,
with non-representable padded values carrying exactly zero amplitude.
"""

from __future__ import annotations

import math

import numpy as np

from .bayesnet import BayesianNetwork
from .errors import CapacityError, DomainError
from .qsim import DEFAULT_QUBIT_CAP, CircuitPlan, CRy


def rotation_angle(p: float) -> float:
    """Angle giving amplitude sqrt(p) on |1>: 2*arcsin(sqrt(p))."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability {p} outside [0, 1]")
    return 2.0 * math.asin(math.sqrt(p))


def _row_controls(net: BayesianNetwork, plan: CircuitPlan, var: int, row: int) -> tuple:
    """Controls pinning every parent qubit to the row's parent assignment."""
    controls = []
    parents = net.variables[var].parents
    arities = net.parent_arities(var)
    values = []
    rest = row
    for a in reversed(arities):
        values.append(rest % a)
        rest //= a
    values.reverse()  # first parent most significant in the row index
    for p, value in zip(parents, values):
        r = plan.var_map[p]
        for b, qubit in enumerate(r):
            controls.append((qubit, (value >> b) & 1))
    return tuple(controls)


def _cascade_angles(probs: np.ndarray, width: int):
    """(qubit offset, higher-bit pattern, angle) triples for one CPT row.

    ``probs`` is the row padded to length 2**width. Yields the most
    significant qubit first; a branch with zero mass gets angle 0 so the op
    is still emitted.
    """
    for j in range(width - 1, -1, -1):
        for h in range(1 << (width - 1 - j)):
            den = 0.0
            num = 0.0
            for v in range(1 << (j + 1)):
                p = probs[(h << (j + 1)) | v]
                den += p
                if (v >> j) & 1:
                    num += p
            angle = rotation_angle(min(num / den, 1.0)) if den > 0 else 0.0
            yield j, h, angle


def encode(net: BayesianNetwork, cap: int = DEFAULT_QUBIT_CAP) -> CircuitPlan:
    """State-preparation plan whose squared amplitudes are the joint."""
    total = net.qubit_cost()
    if total > cap:
        raise CapacityError(f"network needs {total} qubits, cap is {cap}")
    var_map: dict[int, range] = {}
    offset = 0
    for i, v in enumerate(net.variables):
        var_map[i] = range(offset, offset + v.qubits())
        offset += v.qubits()
    plan = CircuitPlan(q=total, ops=[], var_map=var_map)

    for i, v in enumerate(net.variables):
        width = v.qubits()
        start = var_map[i].start
        padded = np.zeros(1 << width)
        for row in range(net.cpts[i].n_rows):
            padded[:] = 0.0
            padded[: v.arity] = net.cpts[i].rows[row]
            row_controls = _row_controls(net, plan, i, row)
            for j, h, angle in _cascade_angles(padded, width):
                own = tuple(
                    (start + j + 1 + b, (h >> b) & 1) for b in range(width - 1 - j)
                )
                plan.ops.append(CRy(target=start + j, angle=angle, controls=row_controls + own))
    return plan


def op_count(net: BayesianNetwork) -> int:
    """Exact number of controlled rotations ``encode`` emits."""
    total = 0
    for i, v in enumerate(net.variables):
        rows = int(np.prod(net.parent_arities(i), dtype=object)) if v.parents else 1
        total += rows * ((1 << v.qubits()) - 1)
    return total


def max_in_degree(net: BayesianNetwork) -> int:
    return max((len(v.parents) for v in net.variables), default=0)


def encoding_cost(net: BayesianNetwork) -> int:
    """The n * 2**m accounting term: n variables, m the maximum in-degree."""
    return net.n_vars * (1 << max_in_degree(net))


def basis_index(plan: CircuitPlan, assignment) -> int:
    """Basis index whose register bits spell the given variable assignment."""
    index = 0
    for var, value in enumerate(assignment):
        r = plan.var_map[var]
        if value >= (1 << len(r)):
            raise DomainError(f"value {value} does not fit variable {var}'s register")
        index |= int(value) << r.start
    return index


def register_value(plan: CircuitPlan, var: int, index):
    """Read one variable's value out of a basis index (or index array)."""
    r = plan.var_map[var]
    return (index >> r.start) & ((1 << len(r)) - 1)
