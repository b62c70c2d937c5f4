"""Acceptance criteria, one test each; results are echoed in the terminal summary."""

import time

import networkx as nx
import pytest

from conftest import ACCEPTANCE_LINES
from np_gadget.baselines import edmonds_karp, prim_mst
from np_gadget.certs import FlowCertificate, PathCertificate, Reason, SearchStats, TreeCertificate
from np_gadget.cli import main
from np_gadget.cnf import brute_force_sat, evaluate, to_dimacs
from np_gadget.fixtures import B, U3
from np_gadget.flow import flow_build, flow_extract, flow_from_assignment, flow_solve, flow_verify
from np_gadget.harness import roundtrip, sweep_instances
from np_gadget.rst import rst_build, rst_extract, rst_solve, rst_verify
from np_gadget.serialize import to_json
from np_gadget.vvsp import (
    path_from_assignment,
    vvsp_build,
    vvsp_extract,
    vvsp_min_cost2,
    vvsp_solve,
    vvsp_verify,
)

PIPELINES = {
    "rst": (rst_build, rst_solve, rst_verify, rst_extract),
    "flow": (flow_build, flow_solve, flow_verify, flow_extract),
    "vvsp": (vvsp_build, vvsp_solve, vvsp_verify, vvsp_extract),
}


def record(name, ok, detail):
    ACCEPTANCE_LINES.append((name, ok, detail))
    assert ok, detail


@pytest.fixture(scope="module")
def sweep():
    instances = sweep_instances((3, 5), (1, 6), 200, 42)[:200]  # the 200 seeded formulas only
    t0 = time.perf_counter()
    report = roundtrip(instances)
    return instances, report, time.perf_counter() - t0


# -- AC1 --------------------------------------------------------------------------

def test_ac1_fixture_b():
    problems = []
    values = {}
    for problem, (build, solve, verify, extract) in PIPELINES.items():
        t0 = time.perf_counter()
        inst, labels = build(B)
        cert = solve(inst)
        report = verify(inst, cert) if cert is not None else None
        a = extract(labels, cert, B.num_vars) if cert is not None else None
        elapsed = time.perf_counter() - t0
        values[problem] = report.value if report else None
        problems.append(report is not None and report.accepted and evaluate(B, a) and elapsed < 1.0)
    v_inst, _ = vvsp_build(B)
    ok = (all(problems) and values["rst"] == 17 == 4 * 4 + 1 and values["flow"] == 16
          and values["vvsp"] <= 4420 == v_inst.budget_sq and v_inst.big_weight == 33)
    record("AC1 fixture B yes on all three", ok,
           f"rst cost {values['rst']}, flow value {values['flow']}, vvsp cost^2 {values['vvsp']} <= 4420")


# -- AC2 --------------------------------------------------------------------------

def test_ac2_fixture_u3():
    t0 = time.perf_counter()
    r_inst, _ = rst_build(U3)
    r_stats = SearchStats()
    r_none = rst_solve(r_inst, stats=r_stats) is None
    f_inst, _ = flow_build(U3)
    f_stats = SearchStats()
    f_none = flow_solve(f_inst, stats=f_stats) is None
    v_inst, _ = vvsp_build(U3)
    v_none = vvsp_solve(v_inst) is None
    best = vvsp_min_cost2(v_inst)
    elapsed = time.perf_counter() - t0
    M = v_inst.big_weight
    gap = best is not None and best[0] >= 3 * M * M + 2 * M + 1 == 198662 > v_inst.budget_sq == 198659
    ok = (r_none and f_none and v_none and gap and M == 257
          and f_stats.patterns <= 2 ** 3 and r_stats.nodes <= 3 ** 8 and elapsed < 60)
    record("AC2 fixture U3 proven no", ok,
           f"rst {r_stats.nodes} branches, flow {f_stats.patterns} patterns, "
           f"vvsp min cost^2 {best[0] if best else None} >= 198662 > 198659, {elapsed:.2f}s")


# -- AC3 --------------------------------------------------------------------------

def test_ac3_roundtrip_sweep(sweep):
    instances, report, elapsed = sweep
    failures = report.failures()
    ok = len(report.rows) == 200 and not failures and elapsed < 300
    n_sat = sum(r.oracle for r in report.rows)
    record("AC3 round-trip sweep", ok,
           f"{len(report.rows) - len(failures)}/{len(report.rows)} rows agree "
           f"({n_sat} sat, {len(report.rows) - n_sat} unsat), {elapsed:.1f}s")


# -- AC4 --------------------------------------------------------------------------

def _size_errors(cnf):
    V, C = cnf.num_vars, cnf.num_clauses
    r, _ = rst_build(cnf)
    f, _ = flow_build(cnf)
    v, _ = vvsp_build(cnf)
    counts = {}
    for clause in cnf.clauses:
        for lit in clause:
            counts[lit.to_int()] = counts.get(lit.to_int(), 0) + 1
    n_forbidden = sum(counts.get(i, 0) * counts.get(-i, 0) for i in range(1, V + 1))
    M = v.big_weight
    checks = [
        (r.graph.n, 4 * C + 2), (r.graph.m, 7 * C + 1), (len(r.forbidden), n_forbidden), (r.budget, 4 * C + 2),
        (f.net.n, 3 + 3 * V + 4 * C), (len(f.net.arcs), 5 * V + 7 * C + 1),
        (len(f.all_or_nothing), 2 * V), (f.target, V * C),
        (v.graph.n, 4 * V + 5 * C), (v.graph.m, 5 * V + 7 * C - 1),
        (v.graph.dim, 2 * V), (v.budget_sq, V * M * M + C ** 3),
    ]
    return sum(got != want for got, want in checks)


def test_ac4_size_formulas(sweep):
    instances, _, _ = sweep
    formulas = [cnf for _, cnf in instances] + [B, U3]
    bad = sum(_size_errors(cnf) for cnf in formulas)
    record("AC4 size formulas", bad == 0, f"{len(formulas)} formulas x 12 quantities, {bad} mismatches")


# -- AC5 --------------------------------------------------------------------------

def _expected_tree_reason(inst, edges):
    g = inst.graph
    h = nx.MultiGraph()
    h.add_nodes_from(range(g.n))
    for eid in edges:
        e = g.edges[eid]
        h.add_edge(e.u, e.v, key=eid)
    if not nx.is_tree(h):
        return Reason.NOT_SPANNING_TREE
    if any(a in edges and b in edges for a, b in inst.forbidden):
        return Reason.FORBIDDEN_PAIR
    if sum(g.edges[e].w for e in edges) > inst.budget:
        return Reason.COST_EXCEEDED
    return None


def _tree_mutants(inst, cert):
    tree = set(cert.edges)
    others = [e.id for e in inst.graph.edges if e.id not in tree]
    for e in sorted(tree):
        yield tree - {e}
        for f in others:
            yield (tree - {e}) | {f}


def _expected_flow_reason(inst, f):
    net = inst.net
    for a in net.arcs:
        if not 0 <= f.get(a.id, 0) <= a.cap:
            return Reason.CAPACITY_VIOLATED
    for aid in inst.all_or_nothing:
        if f.get(aid, 0) not in (0, net.arcs[aid].cap):
            return Reason.NOT_ALL_OR_NOTHING
    for v in range(net.n):
        if v in (net.source, net.sink):
            continue
        if sum(f.get(a.id, 0) for a in net.arcs if a.head == v) != sum(f.get(a.id, 0) for a in net.arcs if a.tail == v):
            return Reason.CONSERVATION_VIOLATED
    return None


def _flow_mutants(inst, cert):
    for a in inst.net.arcs:
        for delta in (1, -1):
            d = cert.as_dict()
            d[a.id] = d.get(a.id, 0) + delta
            yield d


def _expected_path_reason(inst, vs):
    g = inst.graph
    if not vs:
        return Reason.EMPTY_PATH
    if vs[0] != inst.source or vs[-1] != inst.target:
        return Reason.WRONG_ENDPOINT
    if len(set(vs)) != len(vs):
        return Reason.NOT_SIMPLE
    if any(not g_has_edge(g, a, b) for a, b in zip(vs, vs[1:])):
        return Reason.NOT_ADJACENT
    vec = {}
    for a, b in zip(vs, vs[1:]):
        for c, x in g.edge_between[(a, b)].w.entries:
            vec[c] = vec.get(c, 0) + x
    if sum(x * x for x in vec.values()) > inst.budget_sq:
        return Reason.COST_EXCEEDED
    return None


def g_has_edge(g, a, b):
    return any(x == b for x, _ in g.adjacency[a])


def _path_mutants(inst, cert):
    vs = list(cert.vertices)
    for k in range(1, len(vs)):  # truncations from either end
        yield tuple(vs[:k])
        yield tuple(vs[k:])
    for i in range(len(vs) - 1):  # detours: step aside to a neighbour, then continue or come back
        for x, _ in inst.graph.adjacency[vs[i]]:
            if x == vs[i + 1]:
                continue
            yield tuple(vs[: i + 1] + [x] + vs[i + 1:])
            yield tuple(vs[: i + 1] + [x, vs[i]] + vs[i + 1:])


def test_ac5_mutation_suite(sweep):
    instances, report, _ = sweep
    sat = [cnf for (_, cnf), row in zip(instances, report.rows) if row.oracle]
    certs = []
    for k, cnf in enumerate(sat):
        problem = ("rst", "flow", "vvsp")[k % 3]
        build, solve, _, _ = PIPELINES[problem]
        inst, _ = build(cnf)
        certs.append((problem, inst, solve(inst)))
        if len(certs) == 50:
            break
    rejected = wrong = still_valid = accepted_valid = 0
    for problem, inst, cert in certs:
        if problem == "rst":
            cases = [(_expected_tree_reason(inst, m), rst_verify(inst, TreeCertificate.of(m)))
                     for m in _tree_mutants(inst, cert)]
        elif problem == "flow":
            cases = [(_expected_flow_reason(inst, m), flow_verify(inst, FlowCertificate(m)))
                     for m in _flow_mutants(inst, cert)]
        else:
            cases = [(_expected_path_reason(inst, m), vvsp_verify(inst, PathCertificate(m)))
                     for m in _path_mutants(inst, cert)]
        for expected, got in cases:
            if expected is None:
                still_valid += 1
                accepted_valid += got.accepted
            elif not got.accepted and got.reason == expected:
                rejected += 1
            else:
                wrong += 1
    ok = len(certs) == 50 and wrong == 0 and accepted_valid == still_valid and rejected > 0
    record("AC5 verifier mutation suite", ok,
           f"{len(certs)} certificates, {rejected}/{rejected + wrong} invalid mutants rejected with the right "
           f"reason; {accepted_valid}/{still_valid} tree swaps that yield another valid tree accepted")


# -- AC6 --------------------------------------------------------------------------

def test_ac6_baselines():
    got = (prim_mst(rst_build(B)[0].graph)[1], prim_mst(rst_build(U3)[0].graph)[1],
           edmonds_karp(flow_build(B)[0].net)[0], edmonds_karp(flow_build(U3)[0].net)[0])
    record("AC6 baselines ignore the restriction", got == (17, 33, 16, 24),
           f"prim {got[0]}/{got[1]}, edmonds_karp {got[2]}/{got[3]}")


# -- AC7 --------------------------------------------------------------------------

def test_ac7_constructive(sweep):
    _, report, _ = sweep
    rows = [r for r in report.rows if r.oracle]
    good = 0
    for row in rows:
        w = brute_force_sat(row.cnf).witness
        f_inst, _ = flow_build(row.cnf)
        v_inst, _ = vvsp_build(row.cnf)
        f_rep = flow_verify(f_inst, flow_from_assignment(row.cnf, w))
        v_rep = vvsp_verify(v_inst, path_from_assignment(row.cnf, w))
        good += f_rep.accepted and f_rep.value == f_inst.target and v_rep.accepted
    record("AC7 constructive directions", good == len(rows) > 0,
           f"{good}/{len(rows)} satisfiable instances: flow and path constructions accepted")


# -- AC8 --------------------------------------------------------------------------

def _cli_pipeline(tmp, problem, name, cnf, capsys):
    (tmp / f"{name}.cnf").write_text(to_dimacs(cnf))
    inst_path, cert_path = tmp / f"{problem}-{name}.json", tmp / f"{problem}-{name}.cert.json"
    labels_path = tmp / f"{problem}-{name}.labels.json"
    assert main(["reduce", "--problem", problem, "--cnf", str(tmp / f"{name}.cnf"), "--out", str(inst_path)]) == 0
    solved = main(["solve", "--instance", str(inst_path), "--out", str(cert_path)])
    if solved != 0:
        return solved, None, None, None
    verified = main(["verify", "--instance", str(inst_path), "--certificate", str(cert_path)])
    capsys.readouterr()
    extracted = main(["extract", "--labels", str(labels_path), "--certificate", str(cert_path),
                      "--vars", str(cnf.num_vars)])
    line = capsys.readouterr().out.strip()
    return solved, verified if extracted == 0 else None, cert_path.read_text(), line


def test_ac8_cli_matches_memory(tmp_path, capsys):
    mismatches = []
    for name, cnf in (("B", B), ("U3", U3)):
        for problem, (build, solve, verify, extract) in PIPELINES.items():
            inst, labels = build(cnf)
            cert = solve(inst)
            if cert is None:
                want = (1, None, None, None)
            else:
                a = extract(labels, cert, cnf.num_vars)
                want = (0, 0 if verify(inst, cert).accepted else 1, to_json(cert), " ".join(a.lines()))
            got = _cli_pipeline(tmp_path, problem, name, cnf, capsys)
            if got != want:
                mismatches.append(f"{problem}({name})")
    record("AC8 CLI file pipeline matches in-memory", not mismatches,
           f"6 pipelines, mismatches: {', '.join(mismatches) or 'none'}")
