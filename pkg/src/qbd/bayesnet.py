"""Discrete Bayesian networks with action/outcome/evidence roles.

Variables are identified by their topological index; names and value labels
are surface syntax for documents and the CLI. Parents always point to
earlier indices, so acyclicity holds by construction and a joint probability
is a single forward pass over the conditional probability tables.

All types are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParseError, ValidationError

PROB_TOL = 1e-9
DEFAULT_QUBIT_CAP = 20


@dataclass(frozen=True)
class Variable:
    """A discrete variable: ``arity`` values, parents by topological index."""

    name: str
    arity: int
    parents: tuple[int, ...] = ()
    values: tuple[str, ...] | None = None  # optional value labels, surface sugar

    def qubits(self) -> int:
        return max(1, math.ceil(math.log2(self.arity)))


class Cpt:
    """Conditional probability table: one row per parent assignment.

    Rows are in lexicographic parent-assignment order with the first listed
    parent most significant; each row is a probability vector over the
    variable's values.
    """

    def __init__(self, rows) -> None:
        self.rows = np.asarray(rows, dtype=float)
        if self.rows.ndim != 2:
            raise ParseError(f"CPT must be a table of rows, got shape {self.rows.shape}")

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def arity(self) -> int:
        return self.rows.shape[1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Cpt) and self.rows.shape == other.rows.shape and bool(
            np.array_equal(self.rows, other.rows)
        )


@dataclass
class BayesianNetwork:
    variables: list[Variable]
    cpts: list[Cpt]

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    def arities(self) -> tuple[int, ...]:
        return tuple(v.arity for v in self.variables)

    def qubit_cost(self) -> int:
        return sum(v.qubits() for v in self.variables)

    def parent_arities(self, i: int) -> tuple[int, ...]:
        return tuple(self.variables[p].arity for p in self.variables[i].parents)

    def row_index(self, i: int, parent_values) -> int:
        """Row of variable ``i``'s CPT for the given parent values (lex order)."""
        row = 0
        for p, val in zip(self.variables[i].parents, parent_values):
            row = row * self.variables[p].arity + int(val)
        return row

    def var_index(self, name: str) -> int:
        for i, v in enumerate(self.variables):
            if v.name == name:
                return i
        raise DomainError(f"unknown variable {name!r}")

    def value_index(self, var: int, token: str) -> int:
        """Resolve a value given as an index or as a declared label."""
        v = self.variables[var]
        if v.values is not None and token in v.values:
            return v.values.index(token)
        try:
            idx = int(token)
        except ValueError:
            raise DomainError(f"variable {v.name!r} has no value {token!r}") from None
        if not 0 <= idx < v.arity:
            raise DomainError(f"value {idx} out of range for variable {v.name!r} (arity {v.arity})")
        return idx

    def value_label(self, var: int, value: int) -> str:
        v = self.variables[var]
        if v.values is not None and value < len(v.values):
            return v.values[value]
        return str(value)


@dataclass(frozen=True)
class Evidence:
    """Observed assignments, variable index -> value index."""

    assignments: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "Evidence":
        return cls(tuple(sorted((int(k), int(v)) for k, v in d.items())))

    def as_dict(self) -> dict[int, int]:
        return dict(self.assignments)

    def __contains__(self, var: int) -> bool:
        return any(v == var for v, _ in self.assignments)

    def __len__(self) -> int:
        return len(self.assignments)


@dataclass(frozen=True)
class UtilityTable:
    """Non-negative scores over outcome values; at least one positive."""

    values: tuple[float, ...]

    def __post_init__(self):
        if any(u < 0 for u in self.values):
            raise DomainError("utility entries must be non-negative")
        if not any(u > 0 for u in self.values):
            raise DomainError("utility table must have at least one positive entry")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass
class DecisionProblem:
    """A network plus decision roles.

    ``action_var``/``outcome_var``/``utility`` are None for documents that
    only describe a network; decision operations require all of them.
    """

    network: BayesianNetwork
    action_var: int | None = None
    outcome_var: int | None = None
    evidence: Evidence = field(default_factory=Evidence)
    utility: UtilityTable | None = None

    def has_decision_roles(self) -> bool:
        return self.action_var is not None and self.outcome_var is not None and self.utility is not None


@dataclass(frozen=True)
class Violation:
    var: int | None
    message: str

    def __str__(self) -> str:
        return self.message if self.var is None else f"variable {self.var}: {self.message}"


def validate(net: BayesianNetwork, qubit_cap: int = DEFAULT_QUBIT_CAP) -> list[Violation]:
    """Every violated network invariant, with variable index and message."""
    out: list[Violation] = []
    if len(net.cpts) != len(net.variables):
        out.append(Violation(None, f"{len(net.variables)} variables but {len(net.cpts)} CPTs"))
        return out
    for i, (v, cpt) in enumerate(zip(net.variables, net.cpts)):
        if v.arity < 2:
            out.append(Violation(i, f"{v.name!r}: arity must be >= 2, got {v.arity}"))
        for p in v.parents:
            if not 0 <= p < i:
                out.append(Violation(i, f"{v.name!r}: parent {p} is not an earlier variable (topological order)"))
        if v.values is not None and len(v.values) != v.arity:
            out.append(Violation(i, f"{v.name!r}: {len(v.values)} value labels for arity {v.arity}"))
        expected_rows = int(np.prod([net.variables[p].arity for p in v.parents if 0 <= p < i], dtype=object)) if v.parents else 1
        if any(not 0 <= p < i for p in v.parents):
            continue  # row-count check meaningless with broken parents
        if cpt.arity != v.arity:
            out.append(Violation(i, f"{v.name!r}: CPT rows have {cpt.arity} entries, arity is {v.arity}"))
            continue
        if cpt.n_rows != expected_rows:
            out.append(Violation(i, f"{v.name!r}: {cpt.n_rows} CPT rows, expected {expected_rows}"))
            continue
        if np.any(cpt.rows < 0) or np.any(cpt.rows > 1):
            out.append(Violation(i, f"{v.name!r}: CPT entries outside [0, 1]"))
        sums = cpt.rows.sum(axis=1)
        for r, s in enumerate(sums):
            if abs(s - 1.0) > PROB_TOL:
                out.append(Violation(i, f"{v.name!r}: CPT row {r} sums to {s:.12g}, not 1"))
    if net.qubit_cost() > qubit_cap:
        out.append(Violation(None, f"network needs {net.qubit_cost()} qubits, cap is {qubit_cap}"))
    return out


def _ancestors(net: BayesianNetwork, var: int) -> set[int]:
    seen: set[int] = set()
    stack = list(net.variables[var].parents)
    while stack:
        p = stack.pop()
        if p not in seen:
            seen.add(p)
            stack.extend(net.variables[p].parents)
    return seen


def validate_problem(problem: DecisionProblem, qubit_cap: int = DEFAULT_QUBIT_CAP) -> list[Violation]:
    """Network invariants plus the decision-role invariants."""
    net = problem.network
    out = validate(net, qubit_cap)
    for var, val in problem.evidence.assignments:
        if not 0 <= var < net.n_vars:
            out.append(Violation(None, f"evidence names unknown variable index {var}"))
        elif not 0 <= val < net.variables[var].arity:
            out.append(Violation(var, f"evidence value {val} out of range for {net.variables[var].name!r}"))
    if problem.action_var is None:
        return out
    a = problem.action_var
    if problem.network.variables[a].parents:
        out.append(Violation(a, f"action variable {net.variables[a].name!r} must have no parents"))
    if a in problem.evidence:
        out.append(Violation(a, "action variable cannot be observed as evidence"))
    for ev, _ in problem.evidence.assignments:
        if 0 <= ev < net.n_vars and a in _ancestors(net, ev):
            out.append(Violation(a, f"action variable is an ancestor of evidence variable {net.variables[ev].name!r}"))
    if not net.variables[a].parents:
        row = net.cpts[a].rows[0]
        if np.max(np.abs(row - 1.0 / net.variables[a].arity)) > PROB_TOL:
            out.append(Violation(a, f"action prior must be uniform, got {row.tolist()}"))
    if problem.outcome_var is not None and problem.utility is not None:
        if len(problem.utility.values) != net.variables[problem.outcome_var].arity:
            out.append(
                Violation(
                    problem.outcome_var,
                    f"utility table has {len(problem.utility.values)} entries, outcome arity is "
                    f"{net.variables[problem.outcome_var].arity}",
                )
            )
    return out


def ensure_valid_problem(problem: DecisionProblem, force: bool = False,
                         qubit_cap: int = DEFAULT_QUBIT_CAP) -> list[Violation]:
    """Raise on violations unless ``force``; returns them either way."""
    violations = validate_problem(problem, qubit_cap)
    if violations and not force:
        raise ValidationError("; ".join(str(v) for v in violations))
    return violations


def joint_probability(net: BayesianNetwork, assignment) -> float:
    """Product of each variable's CPT entry under the full assignment."""
    assignment = list(assignment)
    if len(assignment) != net.n_vars:
        raise DomainError(f"assignment has {len(assignment)} values for {net.n_vars} variables")
    p = 1.0
    for i, v in enumerate(net.variables):
        val = assignment[i]
        if not 0 <= val < v.arity:
            raise DomainError(f"value {val} out of range for variable {v.name!r}")
        row = net.row_index(i, (assignment[q] for q in v.parents))
        p *= net.cpts[i].rows[row, val]
    return float(p)


# ---------------------------------------------------------------------------
# model documents (JSON)
# ---------------------------------------------------------------------------

def load_model(text: str) -> DecisionProblem:
    """Parse a model document; raises ParseError/ValidationError on bad input."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict) or "nodes" not in doc:
        raise ParseError("document must be an object with a 'nodes' array")
    nodes = doc["nodes"]
    if not isinstance(nodes, list) or not nodes:
        raise ParseError("'nodes' must be a non-empty array")

    names: dict[str, int] = {}
    variables: list[Variable] = []
    cpts: list[Cpt] = []
    for i, node in enumerate(nodes):
        if not isinstance(node, dict):
            raise ParseError(f"node {i} must be an object")
        for key in ("name", "arity", "cpt"):
            if key not in node:
                raise ParseError(f"node {i} is missing {key!r}")
        name = node["name"]
        if name in names:
            raise ParseError(f"duplicate node name {name!r}")
        arity = node["arity"]
        if not isinstance(arity, int) or arity < 2:
            raise ParseError(f"node {name!r}: arity must be an integer >= 2")
        parents = []
        for pname in node.get("parents", []):
            if pname not in names:
                raise ParseError(f"node {name!r}: parent {pname!r} not defined earlier")
            parents.append(names[pname])
        values = node.get("values")
        if values is not None:
            if not isinstance(values, list) or len(values) != arity:
                raise ParseError(f"node {name!r}: 'values' must list {arity} labels")
            values = tuple(str(s) for s in values)
        rows = node["cpt"]
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ParseError(f"node {name!r}: 'cpt' must be an array of rows")
        expected_rows = 1
        for p in parents:
            expected_rows *= variables[p].arity
        if len(rows) != expected_rows:
            raise ParseError(f"node {name!r}: {len(rows)} CPT rows, expected {expected_rows}")
        for r, row in enumerate(rows):
            if len(row) != arity:
                raise ParseError(f"node {name!r}: CPT row {r} has {len(row)} entries, arity is {arity}")
        names[name] = i
        variables.append(Variable(name=name, arity=arity, parents=tuple(parents), values=values))
        cpts.append(Cpt(rows))

    net = BayesianNetwork(variables, cpts)

    def resolve(key):
        if key not in doc or doc[key] is None:
            return None
        if doc[key] not in names:
            raise ParseError(f"{key!r} names unknown node {doc[key]!r}")
        return names[doc[key]]

    action = resolve("action")
    outcome = resolve("outcome")
    ev_doc = doc.get("evidence", {}) or {}
    if not isinstance(ev_doc, dict):
        raise ParseError("'evidence' must map node names to value indices")
    ev = {}
    for ename, val in ev_doc.items():
        if ename not in names:
            raise ParseError(f"evidence names unknown node {ename!r}")
        if not isinstance(val, int):
            raise ParseError(f"evidence for {ename!r} must be an integer value index")
        ev[names[ename]] = val
    utility = None
    if doc.get("utility") is not None:
        if not isinstance(doc["utility"], list):
            raise ParseError("'utility' must be an array of reals")
        if outcome is None:
            raise ParseError("'utility' given without an 'outcome' node")
        try:
            utility = UtilityTable(tuple(float(u) for u in doc["utility"]))
        except DomainError as e:
            raise ValidationError(str(e)) from None

    problem = DecisionProblem(net, action_var=action, outcome_var=outcome,
                              evidence=Evidence.from_dict(ev), utility=utility)
    violations = validate_problem(problem)
    if violations:
        raise ValidationError(str(violations[0]))
    return problem


def save_model(problem: DecisionProblem) -> str:
    """Serialize back to the document format; stable round trip."""
    net = problem.network
    nodes = []
    for v, cpt in zip(net.variables, net.cpts):
        node: dict = {
            "name": v.name,
            "arity": v.arity,
            "parents": [net.variables[p].name for p in v.parents],
            "cpt": [[float(x) for x in row] for row in cpt.rows],
        }
        if v.values is not None:
            node["values"] = list(v.values)
        nodes.append(node)
    doc: dict = {"nodes": nodes}
    if problem.action_var is not None:
        doc["action"] = net.variables[problem.action_var].name
    if problem.outcome_var is not None:
        doc["outcome"] = net.variables[problem.outcome_var].name
    if len(problem.evidence):
        doc["evidence"] = {net.variables[k].name: v for k, v in problem.evidence.assignments}
    if problem.utility is not None:
        doc["utility"] = [float(u) for u in problem.utility.values]
    return json.dumps(doc, indent=2)
