import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from np_gadget.certs import Reason, SearchStats, TreeCertificate
from np_gadget.cnf import Assignment, CnfInstance, brute_force_sat, evaluate, random_cnf
from np_gadget.errors import BadM, InconsistentCertificate, SearchBudgetExceeded
from np_gadget.fixtures import B, SINGLE, U3
from np_gadget.graph import is_spanning_tree
from np_gadget.rst import canonical_tree, rst_build, rst_extract, rst_solve, rst_verify

CANONICAL_CHOICES = [1, 0, 0, 2]  # y@c1, ~x@c2, ~x@c3, ~w@c4


def _expected_forbidden(cnf):
    count = {}
    for clause in cnf.clauses:
        for lit in clause:
            count[lit.to_int()] = count.get(lit.to_int(), 0) + 1
    return sum(count.get(v, 0) * count.get(-v, 0) for v in range(1, cnf.num_vars + 1))


@pytest.mark.parametrize("cnf, n, m, f, k", [
    (B, 18, 29, 8, 18),
    (SINGLE, 6, 8, 0, 6),
    (U3, 34, 57, 48, 34),
])
def test_build_sizes(cnf, n, m, f, k):
    inst, labels = rst_build(cnf)
    assert (inst.graph.n, inst.graph.m, len(inst.forbidden), inst.budget) == (n, m, f, k)
    assert len(labels.edge_literals) == 3 * cnf.num_clauses


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 6), st.integers(1, 8), st.integers(0, 2**32))
def test_build_size_formulas(v, c, seed):
    cnf = random_cnf(v, c, seed)
    inst, _ = rst_build(cnf)
    assert inst.graph.n == 4 * c + 2
    assert inst.graph.m == 7 * c + 1
    assert len(inst.forbidden) == _expected_forbidden(cnf)


def test_bad_m():
    with pytest.raises(BadM):
        rst_build(B, M=17)
    assert rst_build(B, M=18)[0].budget == 18


def test_verify_canonical_tree():
    inst, labels = rst_build(B)
    report = rst_verify(inst, canonical_tree(inst, labels, CANONICAL_CHOICES))
    assert report.accepted and report.value == 17


def test_verify_forbidden_pair():
    inst, labels = rst_build(B)
    report = rst_verify(inst, canonical_tree(inst, labels, [0, 0, 0, 2]))
    assert not report.accepted and report.reason == Reason.FORBIDDEN_PAIR


def test_verify_star_edge_exceeds_budget():
    inst, labels = rst_build(B)
    tree = set(canonical_tree(inst, labels, CANONICAL_CHOICES).edges)
    # swap clause 1's labelled edge for its star edge: still a spanning tree
    tree.remove(labels_edge(labels, 0, 1))
    star = next(e.id for e in inst.graph.edges if e.w == inst.big_weight and e.u == 5)
    tree.add(star)
    report = rst_verify(inst, TreeCertificate.of(tree))
    assert report.reason == Reason.COST_EXCEEDED and report.value == 34


def labels_edge(labels, clause, pos):
    return sorted(e for e, j in labels.clause_of_edge.items() if j == clause)[pos]


def test_verify_not_a_tree():
    inst, labels = rst_build(B)
    tree = set(canonical_tree(inst, labels, CANONICAL_CHOICES).edges)
    tree.pop()
    assert rst_verify(inst, TreeCertificate.of(tree)).reason == Reason.NOT_SPANNING_TREE


def test_solve_b():
    inst, labels = rst_build(B)
    cert = rst_solve(inst)
    report = rst_verify(inst, cert)
    assert report.accepted and report.value == 17
    assert evaluate(B, rst_extract(labels, cert))


def test_solve_single():
    inst, _ = rst_build(SINGLE)
    report = rst_verify(inst, rst_solve(inst))
    assert report.accepted and report.value == 5 <= inst.budget


def test_solve_u3_proves_none():
    inst, _ = rst_build(U3)
    stats = SearchStats()
    assert rst_solve(inst, stats=stats) is None
    assert 0 < stats.nodes <= 3 ** 8


def test_u3_no_consistent_label_choice():
    # independent oracle: one literal per clause, no complementary pair
    choices = itertools.product(*U3.to_ints())
    assert not any(all(-x not in pick for x in pick) for pick in choices)


def test_node_limit():
    inst, _ = rst_build(U3)
    with pytest.raises(SearchBudgetExceeded):
        rst_solve(inst, node_limit=10)


def _all_spanning_trees(g):
    for subset in itertools.combinations(range(g.m), g.n - 1):
        if is_spanning_tree(g, subset):
            yield subset


SMALL = [
    CnfInstance.from_ints(3, [[1, 2, 3]]),
    CnfInstance.from_ints(3, [[1, 2, 3], [-1, -2, -3]]),
    CnfInstance.from_ints(3, [[1, 2, 3], [-1, 2, 3]]),
    CnfInstance.from_ints(4, [[1, -2, 3], [-1, 2, -4]]),
]


@pytest.mark.parametrize("cnf", SMALL)
def test_threshold_dichotomy(cnf):
    inst, _ = rst_build(cnf)
    C, M = cnf.num_clauses, inst.big_weight
    any_feasible = False
    for tree in _all_spanning_trees(inst.graph):
        cost = sum(inst.graph.edges[e].w for e in tree)
        if any(inst.graph.edges[e].w == M for e in tree):
            assert cost >= 4 * C + M > inst.budget
        else:
            assert cost == 4 * C + 1 <= inst.budget
        if rst_verify(inst, TreeCertificate.of(tree)).accepted:
            any_feasible = True
    assert any_feasible == brute_force_sat(cnf).satisfiable == (rst_solve(inst) is not None)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5), st.integers(1, 2), st.integers(0, 2**32))
def test_contraction_preserves_answer(v, c, seed):
    inst, _ = rst_build(random_cnf(v, c, seed))
    assert (rst_solve(inst) is None) == (rst_solve(inst, contract=False) is None)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5), st.integers(1, 6), st.integers(0, 2**32))
def test_soundness_and_completeness(v, c, seed):
    cnf = random_cnf(v, c, seed)
    inst, labels = rst_build(cnf)
    cert = rst_solve(inst)
    assert (cert is not None) == brute_force_sat(cnf).satisfiable
    if cert is not None:
        assert rst_verify(inst, cert).accepted
        assert evaluate(cnf, rst_extract(labels, cert, cnf.num_vars))


def test_extract_canonical_tree():
    inst, labels = rst_build(B)
    a = rst_extract(labels, canonical_tree(inst, labels, CANONICAL_CHOICES), 4)
    assert a == Assignment((False, True, False, False))
    assert evaluate(B, a)


def test_extract_single_x_edge():
    inst, labels = rst_build(SINGLE)
    a = rst_extract(labels, canonical_tree(inst, labels, [0]), 3)
    assert a == Assignment((True, False, False))


def test_extract_inconsistent():
    inst, labels = rst_build(B)
    with pytest.raises(InconsistentCertificate):
        rst_extract(labels, canonical_tree(inst, labels, [0, 0, 0, 2]))
