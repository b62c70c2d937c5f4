import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from np_gadget.certs import PathCertificate, Reason, SearchStats
from np_gadget.cnf import Assignment, brute_force_sat, evaluate, random_cnf
from np_gadget.errors import BadM, MalformedGadgetTraversal, NotAPath, NotSatisfying
from np_gadget.fixtures import B, B_WITNESS, SINGLE, U3
from np_gadget.vvsp import (
    _dfs,
    path_cost2,
    path_from_assignment,
    vvsp_build,
    vvsp_extract,
    vvsp_min_cost2,
    vvsp_solve,
    vvsp_verify,
)

B_CHOICES = [1, 0, 0, 2]  # y, ~x, ~x, ~w


@pytest.mark.parametrize("cnf, n, m, M, budget", [
    (B, 36, 47, 33, 4420),
    (SINGLE, 17, 21, 2, 13),
    (U3, 52, 70, 257, 198659),
])
def test_build_sizes(cnf, n, m, M, budget):
    inst, _ = vvsp_build(cnf)
    g = inst.graph
    assert (g.n, g.m, g.dim, inst.big_weight, inst.budget_sq) == (n, m, 2 * cnf.num_vars, M, budget)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 6), st.integers(1, 8), st.integers(0, 2**32))
def test_size_formulas(v, c, seed):
    inst, _ = vvsp_build(random_cnf(v, c, seed))
    M = inst.big_weight
    assert 2 * M > c ** 3
    assert (inst.graph.n, inst.graph.m, inst.graph.dim) == (4 * v + 5 * c, 5 * v + 7 * c - 1, 2 * v)
    assert inst.budget_sq == v * M * M + c ** 3


def test_bad_m():
    with pytest.raises(BadM):
        vvsp_build(B, M=32)


def test_path_cost2_examples():
    inst, labels = vvsp_build(B)
    assert path_cost2(inst, PathCertificate((0,))) == 0
    assert path_cost2(inst, PathCertificate((0, 1, 3))) == 33 ** 2
    witness_path = path_from_assignment(B, B_WITNESS, B_CHOICES)
    assert path_cost2(inst, witness_path) == 4362
    with pytest.raises(NotAPath):
        path_cost2(inst, PathCertificate((0, 3)))


def _swap_clause_choice(cnf, path, clause, pos):
    vs = list(path.vertices)
    k = 3 * cnf.num_vars + 3 * clause + 1
    vs[k] = 4 * cnf.num_vars + 5 * clause + 1 + pos
    return PathCertificate(tuple(vs))


def test_verify_examples():
    inst, _ = vvsp_build(B)
    good = path_from_assignment(B, B_WITNESS, B_CHOICES)
    report = vvsp_verify(inst, good)
    assert report.accepted and report.value == 4362
    bad = vvsp_verify(inst, _swap_clause_choice(B, good, 0, 0))
    assert bad.reason == Reason.COST_EXCEEDED and bad.value == 4428


@pytest.mark.parametrize("vertices, reason", [
    ((), Reason.EMPTY_PATH),
    ((0, 99), Reason.UNKNOWN_VERTEX),
    ((1, 3), Reason.WRONG_ENDPOINT),
    ((0, 1, 3, 2, 0, 35), Reason.NOT_SIMPLE),
    ((0, 3, 35), Reason.NOT_ADJACENT),
])
def test_verify_rejections(vertices, reason):
    inst, _ = vvsp_build(B)
    assert vvsp_verify(inst, PathCertificate(vertices)).reason == reason


def test_solve_b():
    inst, labels = vvsp_build(B)
    cert = vvsp_solve(inst)
    report = vvsp_verify(inst, cert)
    assert report.accepted and report.value <= 4420
    assert evaluate(B, vvsp_extract(labels, cert))


def test_solve_single_minimum():
    inst, labels = vvsp_build(SINGLE)
    assert vvsp_verify(inst, vvsp_solve(inst)).accepted
    best, _ = vvsp_min_cost2(inst)
    assert best == 13
    assert path_cost2(inst, path_from_assignment(SINGLE, Assignment((True,) * 3))) == 13


def _oracle_min_cost2(cnf, M):
    # independent of the graph: one branch per variable, one literal per clause
    V = cnf.num_vars
    best = None
    for branches in itertools.product((False, True), repeat=V):
        base = [0] * (2 * V)
        for i, true in enumerate(branches):
            base[V + i if true else i] = M
        for picks in itertools.product(*cnf.to_ints()):
            vec = list(base)
            for lit in picks:
                vec[abs(lit) - 1 + (V if lit < 0 else 0)] += 1
            cost = sum(x * x for x in vec)
            if best is None or cost < best:
                best = cost
    return best


def test_u3_gap():
    inst, _ = vvsp_build(U3)
    M, V = inst.big_weight, U3.num_vars
    assert vvsp_solve(inst) is None
    oracle = _oracle_min_cost2(U3, M)
    assert oracle >= V * M * M + 2 * M + 1 == 198662 > inst.budget_sq
    assert vvsp_min_cost2(inst)[0] == oracle


@pytest.mark.parametrize("cnf", [SINGLE, B])
def test_every_path_crosses_each_gadget_once(cnf):
    inst, labels = vvsp_build(cnf)
    paths = [p for p, _ in _dfs(inst, [None], SearchStats(), 10 ** 7, strict=False)]
    assert len(paths) == 2 ** cnf.num_vars * 3 ** cnf.num_clauses
    clause_mids = [set(range(4 * cnf.num_vars + 5 * j + 1, 4 * cnf.num_vars + 5 * j + 4))
                   for j in range(cnf.num_clauses)]
    for p in paths:
        on = set(p)
        for u, ubar in labels.var_gadget.values():
            assert (u in on) != (ubar in on)
        for mids in clause_mids:
            assert len(mids & on) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5), st.integers(1, 4), st.integers(0, 2**32), st.data())
def test_prefix_monotonicity(v, c, seed, data):
    cnf = random_cnf(v, c, seed)
    inst, _ = vvsp_build(cnf)
    a = Assignment(tuple(data.draw(st.lists(st.booleans(), min_size=v, max_size=v))))
    path = [4 * (i - 1) + (2 if a[i] else 1) for i in range(1, v + 1)]
    full = []
    for i, mid in enumerate(path):
        full += [4 * i, mid, 4 * i + 3]
    for j in range(c):
        full += [4 * v + 5 * j, 4 * v + 5 * j + 1 + data.draw(st.integers(0, 2)), 4 * v + 5 * j + 4]
    costs = [path_cost2(inst, PathCertificate(tuple(full[:k]))) for k in range(1, len(full) + 1)]
    assert costs == sorted(costs)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5), st.integers(1, 6), st.integers(0, 2**32))
def test_soundness_and_completeness(v, c, seed):
    cnf = random_cnf(v, c, seed)
    inst, labels = vvsp_build(cnf)
    cert = vvsp_solve(inst)
    sat = brute_force_sat(cnf)
    assert (cert is not None) == sat.satisfiable
    if cert is not None:
        assert vvsp_verify(inst, cert).accepted
        assert evaluate(cnf, vvsp_extract(labels, cert, cnf.num_vars))
        assert vvsp_verify(inst, path_from_assignment(cnf, sat.witness)).accepted


def test_extract_examples():
    _, labels = vvsp_build(B)
    assert vvsp_extract(labels, path_from_assignment(B, B_WITNESS, B_CHOICES), 4) == B_WITNESS
    _, single = vvsp_build(SINGLE)
    all_bar = path_from_assignment(SINGLE, Assignment((True,) * 3))
    assert vvsp_extract(single, all_bar) == Assignment((True,) * 3)
    with pytest.raises(MalformedGadgetTraversal):
        vvsp_extract(single, PathCertificate((0, 1, 3)))


def test_path_from_assignment_errors():
    with pytest.raises(NotSatisfying):
        path_from_assignment(B, Assignment((False,) * 4))
    with pytest.raises(NotSatisfying):
        path_from_assignment(B, B_WITNESS, [0, 0, 0, 2])


def test_default_choice_path():
    inst, _ = vvsp_build(B)
    # first true literal per clause: y, ~x, ~x, y
    assert vvsp_verify(inst, path_from_assignment(B, B_WITNESS)).value == 4364
