"""Command-line front end.

Exit codes: 0 yes/success, 1 no/reject, 2 malformed input, 3 search budget
exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .baselines import dijkstra, edmonds_karp, prim_mst, scalarize
from .cnf import evaluate, parse_dimacs, to_dimacs
from .errors import GadgetError, SearchBudgetExceeded
from .flow import FlowInstance, FlowLabels, flow_build, flow_extract, flow_solve, flow_verify
from .harness import roundtrip, sweep_instances
from .rst import RstInstance, RstLabels, default_node_limit, rst_build, rst_extract, rst_solve, rst_verify
from .serialize import certificate_from_dict, instance_from_dict, labels_from_dict, to_dot, to_json
from .vvsp import VvspInstance, VvspLabels, vvsp_build, vvsp_extract, vvsp_solve, vvsp_verify

EXIT_YES, EXIT_NO, EXIT_MALFORMED, EXIT_BUDGET = 0, 1, 2, 3

BUILDERS = {"rst": rst_build, "flow": flow_build, "vvsp": vvsp_build}
SOLVERS = {RstInstance: rst_solve, FlowInstance: flow_solve, VvspInstance: vvsp_solve}
VERIFIERS = {RstInstance: rst_verify, FlowInstance: flow_verify, VvspInstance: vvsp_verify}
EXTRACTORS = {RstLabels: rst_extract, FlowLabels: flow_extract, VvspLabels: vvsp_extract}
KIND = {RstInstance: "rst", FlowInstance: "flow", VvspInstance: "vvsp",
        RstLabels: "rst", FlowLabels: "flow", VvspLabels: "vvsp"}


class Malformed(Exception):
    pass


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise Malformed(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise Malformed(f"{path}: invalid JSON: {exc}") from None


def _load_instance(path: str, problem: Optional[str]):
    inst = instance_from_dict(_read_json(path))
    if problem and KIND[type(inst)] != problem:
        raise Malformed(f"{path} holds a {KIND[type(inst)]} instance, not {problem}")
    return inst


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _summary(inst) -> str:
    if isinstance(inst, RstInstance):
        g = inst.graph
        return f"rst: vertices={g.n} edges={g.m} forbidden_pairs={len(inst.forbidden)} budget={inst.budget}"
    if isinstance(inst, FlowInstance):
        net = inst.net
        return (f"flow: vertices={net.n} arcs={len(net.arcs)} all_or_nothing={len(inst.all_or_nothing)} "
                f"target={inst.target}")
    g = inst.graph
    return f"vvsp: vertices={g.n} edges={g.m} dim={g.dim} budget_sq={inst.budget_sq}"


def cmd_reduce(args) -> int:
    try:
        cnf = parse_dimacs(Path(args.cnf).read_text(encoding="utf-8"))
    except OSError as exc:
        raise Malformed(f"{args.cnf}: {exc.strerror}") from None
    build = BUILDERS[args.problem]
    if args.problem == "flow":
        if args.param_m is not None:
            raise Malformed("--param-m does not apply to flow")
        inst, labels = build(cnf)
    else:
        inst, labels = build(cnf, args.param_m)
    _write(args.out, to_json(inst))
    labels_path = args.labels or str(Path(args.out).with_suffix("")) + ".labels.json"
    _write(labels_path, to_json(labels))
    print(_summary(inst))
    print(f"instance -> {args.out}")
    print(f"labels   -> {labels_path}")
    return EXIT_YES


def cmd_verify(args) -> int:
    inst = _load_instance(args.instance, args.problem)
    cert = certificate_from_dict(_read_json(args.certificate), inst)
    report = VERIFIERS[type(inst)](inst, cert)
    print(report.summary())
    return EXIT_YES if report.accepted else EXIT_NO


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance, args.problem)
    limit = args.node_limit if args.node_limit is not None else default_node_limit()
    try:
        cert = SOLVERS[type(inst)](inst, node_limit=limit)
    except SearchBudgetExceeded as exc:
        print(f"search budget exceeded: {exc}")
        return EXIT_BUDGET
    if cert is None:
        print("no certificate exists")
        return EXIT_NO
    report = VERIFIERS[type(inst)](inst, cert)
    if args.out:
        _write(args.out, to_json(cert))
    print(f"found certificate: {report.summary()}")
    return EXIT_YES


def cmd_extract(args) -> int:
    labels = labels_from_dict(_read_json(args.labels))
    if args.problem and KIND[type(labels)] != args.problem:
        raise Malformed(f"{args.labels} holds {KIND[type(labels)]} labels, not {args.problem}")
    cert = certificate_from_dict(_read_json(args.certificate))
    num_vars = args.num_vars if args.num_vars is not None else labels.num_vars
    a = EXTRACTORS[type(labels)](labels, cert, num_vars)
    print(" ".join(a.lines()))
    if args.check_cnf:
        cnf = parse_dimacs(Path(args.check_cnf).read_text(encoding="utf-8"))
        ok = evaluate(cnf, a)
        print(f"satisfies {args.check_cnf}: {'yes' if ok else 'no'}")
        return EXIT_YES if ok else EXIT_NO
    return EXIT_YES


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None


def cmd_roundtrip(args) -> int:
    instances = sweep_instances(args.vars, args.clauses, args.count, args.seed, args.fixtures)
    report = roundtrip(instances, node_limit=args.node_limit, workers=args.workers)
    print(report.format())
    for row in report.failures():
        print(f"--- disagreement on {row.name}:")
        print(to_dimacs(row.cnf, [f"fingerprint {row.fingerprint}"]), end="")
    return EXIT_YES if report.passed else EXIT_NO


def cmd_dot(args) -> int:
    inst = _load_instance(args.instance, args.problem)
    labels = labels_from_dict(_read_json(args.labels)) if args.labels else None
    sys.stdout.write(to_dot(inst, labels))
    return EXIT_YES


def cmd_baseline(args) -> int:
    inst = _load_instance(args.instance, None)
    if args.algo == "mst":
        if not isinstance(inst, RstInstance):
            raise Malformed("mst needs an rst instance")
        _, cost = prim_mst(inst.graph)
        print(f"minimum spanning tree cost: {cost} (restriction ignored)")
    elif args.algo == "maxflow":
        if not isinstance(inst, FlowInstance):
            raise Malformed("maxflow needs a flow instance")
        value, _ = edmonds_karp(inst.net)
        print(f"maximum flow value: {value} (restriction ignored)")
    else:
        if isinstance(inst, VvspInstance):
            g = scalarize(inst.graph)
            u = inst.source if args.from_vertex is None else args.from_vertex
            v = inst.target if args.to_vertex is None else args.to_vertex
        elif isinstance(inst, RstInstance):
            g = inst.graph
            if args.from_vertex is None or args.to_vertex is None:
                raise Malformed("sp on an rst graph needs --from and --to")
            u, v = args.from_vertex, args.to_vertex
        else:
            raise Malformed("sp needs a vvsp or rst instance")
        result = dijkstra(g, u, v)
        if result is None:
            print("unreachable")
            return EXIT_NO
        print(f"shortest path cost: {result.cost} (restriction ignored)")
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="np-gadget", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    problem = dict(choices=["rst", "flow", "vvsp"])

    r = sub.add_parser("reduce", help="build a target instance from a DIMACS file")
    r.add_argument("--problem", required=True, **problem)
    r.add_argument("--cnf", required=True)
    r.add_argument("--out", required=True, help="instance JSON path")
    r.add_argument("--labels", help="labels JSON path (default: <out>.labels.json)")
    r.add_argument("--param-m", type=int, help="big weight M (rst, vvsp)")
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="check a certificate")
    v.add_argument("--problem", **problem)
    v.add_argument("--instance", required=True)
    v.add_argument("--certificate", required=True)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("solve", help="search for a certificate")
    s.add_argument("--problem", **problem)
    s.add_argument("--instance", required=True)
    s.add_argument("--out", help="certificate JSON path")
    s.add_argument("--node-limit", type=int, help="search budget (default $NP_GADGET_NODE_LIMIT)")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("extract", help="read an assignment off a certificate")
    e.add_argument("--problem", **problem)
    e.add_argument("--labels", required=True)
    e.add_argument("--certificate", required=True)
    e.add_argument("--vars", dest="num_vars", type=int, help="number of variables (default: from labels)")
    e.add_argument("--check-cnf", help="DIMACS file to evaluate the assignment against")
    e.set_defaults(func=cmd_extract)

    t = sub.add_parser("roundtrip", help="compare all reductions with the SAT oracle")
    t.add_argument("--vars", type=_range, default=(3, 5))
    t.add_argument("--clauses", type=_range, default=(1, 6))
    t.add_argument("--count", type=int, default=50)
    t.add_argument("--seed", type=int, default=42)
    t.add_argument("--fixtures", action="store_true", help="always include U3")
    t.add_argument("--node-limit", type=int)
    t.add_argument("--workers", type=int, default=1)
    t.set_defaults(func=cmd_roundtrip)

    d = sub.add_parser("dot", help="print Graphviz DOT for an instance")
    d.add_argument("--problem", **problem)
    d.add_argument("--instance", required=True)
    d.add_argument("--labels")
    d.set_defaults(func=cmd_dot)

    b = sub.add_parser("baseline", help="solve the unrestricted problem")
    b.add_argument("algo", choices=["mst", "sp", "maxflow"])
    b.add_argument("--instance", required=True)
    b.add_argument("--from", dest="from_vertex", type=int)
    b.add_argument("--to", dest="to_vertex", type=int)
    b.set_defaults(func=cmd_baseline)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (Malformed, GadgetError) as exc:
        if isinstance(exc, SearchBudgetExceeded):
            print(f"search budget exceeded: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
