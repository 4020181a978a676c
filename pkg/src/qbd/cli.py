"""Command-line interface.

Subcommands: ``validate`` a model document, ``infer`` a conditional
distribution (exact, rejection sampling, or amplified sampling), ``decide``
with either quantum process or the classical oracle, and ``cost`` for the
operation-count model. Exit codes: 0 success, 1 domain or validation
failure, 2 usage or I/O error. The environment variable ``QBD_QUBIT_CAP``
overrides the simulator's qubit cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import costmodel, report
from .bayesnet import DecisionProblem, load_model, validate_problem
from .classical import evidence_probability, exact_conditional, rejection_sample
from .encoder import max_in_degree
from .errors import QbdError
from .qdecision import decide_classical, decide_process_a, decide_process_b
from .qinference import q_conditional
from .qsim import DEFAULT_QUBIT_CAP


def _qubit_cap() -> int:
    return int(os.environ.get("QBD_QUBIT_CAP", DEFAULT_QUBIT_CAP))


def _read_model(path: str, shift_utilities: bool = False) -> DecisionProblem:
    text = Path(path).read_text()
    if shift_utilities:
        doc = json.loads(text)
        u = doc.get("utility")
        if u and min(u) < 0:
            low = min(u)
            doc["utility"] = [x - low for x in u]
            text = json.dumps(doc)
    return load_model(text)


def _parse_evidence(problem: DecisionProblem, pairs) -> dict[int, int]:
    net = problem.network
    ev: dict[int, int] = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise QbdError(f"evidence must be NAME=VALUE, got {pair!r}")
        name, _, token = pair.partition("=")
        var = net.var_index(name)
        if var in ev:
            raise QbdError(f"variable {name!r} assigned twice in evidence")
        ev[var] = net.value_index(var, token)
    return ev


def _table(rows, header=None) -> str:
    rows = [[str(c) for c in r] for r in rows]
    all_rows = ([header] + rows) if header else rows
    widths = [max(len(r[i]) for r in all_rows) for i in range(len(all_rows[0]))]
    lines = []
    if header:
        lines.append("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)))
    return "\n".join(lines)


def _emit(args, table_lines: list[str], csv_rows: list[list], json_obj: dict) -> None:
    if args.format == "json":
        print(json.dumps(json_obj, indent=2))
    elif args.format == "csv":
        for row in csv_rows:
            print(",".join(str(c) for c in row))
    else:
        print("\n".join(table_lines))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    try:
        problem = _read_model(args.model)
    except QbdError as e:
        print(f"invalid: {e}", file=sys.stderr)
        return 1
    violations = validate_problem(problem, qubit_cap=_qubit_cap())
    if violations:
        for v in violations:
            print(f"invalid: {v}", file=sys.stderr)
        return 1
    net = problem.network
    print(f"ok: {net.n_vars} variables, {net.qubit_cost()} qubits")
    return 0


def cmd_infer(args) -> int:
    problem = _read_model(args.model)
    net = problem.network
    cap = _qubit_cap()
    query = net.var_index(args.query)
    ev = _parse_evidence(problem, args.evidence) if args.evidence else problem.evidence.as_dict()
    if query in ev:
        raise QbdError(f"query variable {args.query!r} is fixed by the evidence")

    metadata: dict = {}
    if args.method == "exact":
        dist = exact_conditional(net, query, ev)
    elif args.method == "rejection":
        result = rejection_sample(net, ev, query, args.shots, args.seed)
        metadata = {"useful_samples": result.useful, "total_samples": result.total}
        if result.estimate is None:
            print(f"error: 0 of {result.total} samples matched the evidence", file=sys.stderr)
            return 1
        dist = result.estimate
    else:  # quantum
        result = q_conditional(net, ev, query, args.shots, args.seed, cap)
        metadata = {
            "grover_iterations": result.amplified.k,
            "predicted_success": result.amplified.predicted_success,
            "accepted_shots": result.accepted,
            "rejected_shots": result.rejected,
        }
        if result.estimate is None:
            print("error: no shot matched the evidence", file=sys.stderr)
            return 1
        dist = result.estimate

    labels = [net.value_label(query, v) for v in dist.support]
    ev_text = {net.variables[k].name: net.value_label(k, v) for k, v in sorted(ev.items())}
    table = [f"method    {args.method}", f"query     {args.query}"]
    if ev_text:
        table.append("evidence  " + ", ".join(f"{k}={v}" for k, v in ev_text.items()))
    for key, val in metadata.items():
        table.append(f"{key}: {val}")
    table.append("")
    table.append(_table([[l, f"{p:.6f}"] for l, p in zip(labels, dist.probs)],
                        header=["value", "probability"]))
    csv_rows = [["value", "probability"]] + [[l, repr(float(p))] for l, p in zip(labels, dist.probs)]
    json_obj = {
        "command": "infer",
        "method": args.method,
        "query": args.query,
        "evidence": ev_text,
        "distribution": {l: float(p) for l, p in zip(labels, dist.probs)},
        "metadata": metadata,
    }
    _emit(args, table, csv_rows, json_obj)
    return 0


def cmd_decide(args) -> int:
    problem = _read_model(args.model, shift_utilities=args.shift_utilities)
    if not problem.has_decision_roles():
        raise QbdError("model document lacks action/outcome/utility roles")
    net = problem.network
    cap = _qubit_cap()
    if args.process == "a":
        rep = decide_process_a(problem, shots=None if args.exact else args.shots,
                               seed=args.seed, force=args.force, cap=cap)
    elif args.process == "b":
        rep = decide_process_b(problem, shots_per_estimate=args.shots, seed=args.seed,
                               force=args.force, cap=cap)
    else:
        rep = decide_classical(problem, force=args.force)
    for v in rep.violations or []:
        print(f"warning: {v}", file=sys.stderr)

    labels = [net.value_label(problem.action_var, a) for a in rep.action_distribution.support]
    chosen = net.value_label(problem.action_var, rep.chosen_action)
    rows = [
        [l, f"{p:.6f}", f"{t:.6f}"]
        for l, p, t in zip(labels, rep.action_distribution.probs, rep.theoretical_distribution.probs)
    ]
    table = [
        f"process        {rep.process}",
        f"chosen action  {chosen}",
        f"shots          {rep.shots_used}",
        f"matched        {rep.matched_shot_fraction:.6f}",
        "",
        _table(rows, header=["action", "probability", "theoretical"]),
    ]
    if rep.expected_utilities is not None:
        eu_rows = [[l, f"{u:.6f}"] for l, u in zip(labels, rep.expected_utilities)]
        table += ["", _table(eu_rows, header=["action", "expected utility"])]
    if rep.classical_ops is not None:
        table.append(f"classical combination ops: {rep.classical_ops}")

    csv_rows = [["action", "probability"]] + [
        [l, repr(float(p))] for l, p in zip(labels, rep.action_distribution.probs)
    ]
    json_obj = {
        "command": "decide",
        "process": rep.process,
        "chosen_action": chosen,
        "action_distribution": {l: float(p) for l, p in zip(labels, rep.action_distribution.probs)},
        "theoretical_distribution": {
            l: float(p) for l, p in zip(labels, rep.theoretical_distribution.probs)
        },
        "shots_used": rep.shots_used,
        "matched_shot_fraction": float(rep.matched_shot_fraction),
    }
    if rep.expected_utilities is not None:
        json_obj["expected_utilities"] = {l: float(u) for l, u in zip(labels, rep.expected_utilities)}
    if rep.classical_ops is not None:
        json_obj["classical_ops"] = rep.classical_ops
    _emit(args, table, csv_rows, json_obj)

    if args.plot_data:
        data_path = report.write_plot_data(args.plot_data, labels, rep.action_distribution.probs)
        fig_path = report.render_action_bars(
            report.plot_sidecar(data_path), labels, rep.action_distribution.probs,
            theoretical=rep.theoretical_distribution.probs,
            title=f"Action distribution (process {rep.process})",
        )
        print(f"plot data: {data_path}\nfigure: {fig_path}", file=sys.stderr)
    return 0


def cmd_cost(args) -> int:
    if args.params:
        parts = args.params.split(",")
        if len(parts) != 7:
            print("usage error: --params needs n,m,Na,Nr,pe,delta,alpha", file=sys.stderr)
            return 2
        try:
            n, m, n_a, n_r = (int(p) for p in parts[:4])
            p_e, delta, alpha = (float(p) for p in parts[4:])
        except ValueError:
            print("usage error: --params values must be numeric", file=sys.stderr)
            return 2
    else:
        problem = _read_model(args.model)
        if not problem.has_decision_roles():
            raise QbdError("model document lacks action/outcome/utility roles")
        net = problem.network
        n, m = net.n_vars, max_in_degree(net)
        n_a = net.variables[problem.action_var].arity
        n_r = net.variables[problem.outcome_var].arity
        p_e = evidence_probability(net, problem.evidence)
        delta, alpha = args.delta, args.alpha

    check = costmodel.ratio_check(n, m, n_a, n_r, p_e, delta, alpha, pi=args.pi)
    est_a, est_b = check.process_a, check.process_b
    rows = [
        ["a", f"{est_a.iterations_per_sample:.6g}", f"{est_a.samples:.6g}",
         f"{est_a.encoding_ops:.6g}", f"{est_a.additive_ops:.6g}", f"{est_a.total_ops:.6g}"],
        ["b", f"{est_b.iterations_per_sample:.6g}", f"{est_b.samples:.6g}",
         f"{est_b.encoding_ops:.6g}", f"{est_b.additive_ops:.6g}", f"{est_b.total_ops:.6g}"],
    ]
    table = [
        f"n={n} m={m} Na={n_a} Nr={n_r} P(e)={p_e:.6g} delta={delta:.6g} alpha={alpha:.6g} pi={args.pi:.6g}",
        "",
        _table(rows, header=["process", "iters/sample", "samples", "encoding", "additive", "total"]),
        "",
        f"ratio B/A       {check.ratio:.6g}",
        f"bound sqrt(Nr/Na)  {check.bound:.6g}",
        f"ratio >= bound  {'yes' if check.satisfied else 'no'}",
    ]
    csv_rows = [["process", "iters_per_sample", "samples", "encoding", "additive", "total"]] + [
        ["a", *(repr(float(x)) for x in (est_a.iterations_per_sample, est_a.samples,
                                         est_a.encoding_ops, est_a.additive_ops, est_a.total_ops))],
        ["b", *(repr(float(x)) for x in (est_b.iterations_per_sample, est_b.samples,
                                         est_b.encoding_ops, est_b.additive_ops, est_b.total_ops))],
        ["ratio", repr(check.ratio), "bound", repr(check.bound), "satisfied", check.satisfied],
    ]

    def estimate_obj(est):
        return {
            "iterations_per_sample": est.iterations_per_sample,
            "samples": est.samples,
            "encoding_ops": est.encoding_ops,
            "additive_ops": est.additive_ops,
            "total_ops": est.total_ops,
        }

    json_obj = {
        "command": "cost",
        "params": {"n": n, "m": m, "n_a": n_a, "n_r": n_r, "p_e": p_e,
                   "delta": delta, "alpha": alpha, "pi": args.pi},
        "process_a": estimate_obj(est_a),
        "process_b": estimate_obj(est_b),
        "ratio": check.ratio,
        "bound": check.bound,
        "ratio_ge_bound": check.satisfied,
    }
    _emit(args, table, csv_rows, json_obj)
    return 0


# ---------------------------------------------------------------------------
# parser / entry
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbd",
        description="Bayesian inference and decision-making on a statevector simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=["table", "csv", "json"], default="table")

    p = sub.add_parser("validate", help="check a model document against every invariant")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("infer", help="conditional distribution of one variable")
    p.add_argument("--model", required=True)
    p.add_argument("--query", required=True, help="variable name to query")
    p.add_argument("--evidence", nargs="*", metavar="NAME=VAL",
                   help="replaces the document's evidence when given")
    p.add_argument("--method", choices=["exact", "rejection", "quantum"], default="exact")
    p.add_argument("--shots", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    add_format(p)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("decide", help="choose an action (process a, b, or classical)")
    p.add_argument("--model", required=True)
    p.add_argument("--process", choices=["a", "b", "classical"], default="a")
    p.add_argument("--shots", type=int, default=8192,
                   help="total shots (a) or shots per action (b)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true",
                   help="process a: read the action marginal off the statevector")
    p.add_argument("--force", action="store_true",
                   help="downgrade problem-invariant violations to warnings")
    p.add_argument("--shift-utilities", action="store_true",
                   help="shift negative utilities up to zero before deciding "
                        "(keeps the argmax, reshapes process-a sampling)")
    p.add_argument("--plot-data", metavar="PATH",
                   help="write action,probability CSV plus a rendered .png next to it")
    add_format(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("cost", help="operation-count model for both processes")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--params", metavar="n,m,Na,Nr,pe,delta,alpha")
    group.add_argument("--model")
    p.add_argument("--delta", type=float, default=0.05, help="with --model: target error")
    p.add_argument("--alpha", type=float, default=0.05, help="with --model: percentile level")
    p.add_argument("--pi", type=float, default=0.5, help="category probability (worst case 0.5)")
    add_format(p)
    p.set_defaults(func=cmd_cost)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except QbdError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
