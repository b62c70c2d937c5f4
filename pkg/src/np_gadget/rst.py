"""Spanning trees with forbidden edge pairs.

The gadget graph has a top vertex, a bottom vertex and, per clause, three
literal vertices plus one clause vertex. Literal vertices hang off the top,
each is joined to its clause vertex by an edge labelled with the literal, and
the clause vertex is joined to the bottom by an expensive edge. Edges carrying
complementary labels are forbidden together, so a cheap tree must reach every
clause vertex through a consistent choice of true literals.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .certs import Reason, SearchStats, TreeCertificate, VerifyReport, accept, reject
from .cnf import Assignment, CnfInstance, Literal
from .errors import BadM, GraphError, InconsistentCertificate, SearchBudgetExceeded
from .graph import Edge, Role, UGraph, UnionFind, is_spanning_tree

DEFAULT_NODE_LIMIT = 2_000_000


def default_node_limit() -> int:
    return int(os.environ.get("NP_GADGET_NODE_LIMIT", DEFAULT_NODE_LIMIT))


@dataclass(frozen=True)
class RstInstance:
    graph: UGraph
    forbidden: frozenset[tuple[int, int]]
    budget: int
    big_weight: Optional[int] = None

    def __post_init__(self):
        pairs = set()
        for pair in self.forbidden:
            a, b = sorted(pair)
            if a == b:
                raise GraphError(f"forbidden pair ({a}, {b}) repeats an edge")
            self.graph.edge(a)
            self.graph.edge(b)
            pairs.add((a, b))
        object.__setattr__(self, "forbidden", frozenset(pairs))
        if self.budget < 0:
            raise GraphError("budget must be nonnegative")

    def partners(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {}
        for a, b in self.forbidden:
            out.setdefault(a, set()).add(b)
            out.setdefault(b, set()).add(a)
        return out


@dataclass(frozen=True)
class RstLabels:
    num_vars: int
    edge_literals: dict[int, Literal]
    clause_of_edge: dict[int, int] = field(default_factory=dict)


def rst_build(cnf: CnfInstance, M: Optional[int] = None) -> tuple[RstInstance, RstLabels]:
    C = cnf.num_clauses
    if M is None:
        M = 4 * C + 2
    elif M <= 4 * C + 1:
        raise BadM(f"M must exceed 4C+1 = {4 * C + 1}, got {M}")

    TOP, BOTTOM = 0, 1
    roles = [Role.TOP, Role.BOTTOM]
    edges = [Edge(0, TOP, BOTTOM, 1)]
    edge_literals: dict[int, Literal] = {}
    clause_of_edge: dict[int, int] = {}

    def add(u, v, w):
        edges.append(Edge(len(edges), u, v, w))
        return edges[-1].id

    for j, clause in enumerate(cnf.clauses):
        base = 2 + 4 * j
        lit_vs = [base, base + 1, base + 2]
        out = base + 3
        roles += [Role.LITERAL] * 3 + [Role.CLAUSE_OUT]
        for x in lit_vs:
            add(TOP, x, 1)
        for x, lit in zip(lit_vs, clause):
            eid = add(x, out, 1)
            edge_literals[eid] = lit
            clause_of_edge[eid] = j
        add(out, BOTTOM, M)

    by_literal: dict[Literal, list[int]] = {}
    for eid, lit in edge_literals.items():
        by_literal.setdefault(lit, []).append(eid)
    forbidden = set()
    for lit, ids in by_literal.items():
        if lit.negated:
            continue
        for a in ids:
            for b in by_literal.get(lit.complement(), ()):
                forbidden.add((min(a, b), max(a, b)))

    graph = UGraph(len(roles), tuple(edges), tuple(roles))
    inst = RstInstance(graph, frozenset(forbidden), budget=M, big_weight=M)
    return inst, RstLabels(cnf.num_vars, edge_literals, clause_of_edge)


def rst_verify(inst: RstInstance, cert: TreeCertificate) -> VerifyReport:
    g = inst.graph
    cost = sum(g.edge(eid).w for eid in cert.edges)
    if not is_spanning_tree(g, cert.edges):
        return reject(Reason.NOT_SPANNING_TREE, cost,
                      f"{len(cert.edges)} edges over {g.n} vertices do not form a spanning tree")
    for a, b in sorted(inst.forbidden):
        if a in cert.edges and b in cert.edges:
            return reject(Reason.FORBIDDEN_PAIR, cost, f"edges {a} and {b} are a forbidden pair")
    if cost > inst.budget:
        return reject(Reason.COST_EXCEEDED, cost, f"cost {cost} > budget {inst.budget}")
    return accept(cost)


# -- exact solver ----------------------------------------------------------------

def _contract_safe_edges(inst: RstInstance, partners: dict[int, set[int]]):
    """Contract edges that some optimal feasible tree can always be assumed to use.

    An edge of minimum weight among those incident to one (contracted) vertex
    lies on a minimum cut; if it is in no live forbidden pair, exchanging it
    into any feasible tree keeps the tree feasible and no more expensive.
    """
    g = inst.graph
    uf = UnionFind(g.n)
    contracted: list[int] = []
    dead: set[int] = set()
    changed = True
    while changed:
        changed = False
        live = [e for e in g.edges if e.id not in dead and uf.find(e.u) != uf.find(e.v)]
        dead.update(e.id for e in g.edges if uf.find(e.u) == uf.find(e.v))
        best: dict[int, int] = {}
        for e in live:
            for x in (uf.find(e.u), uf.find(e.v)):
                if x not in best or e.w < best[x]:
                    best[x] = e.w
        for e in live:
            if any(p not in dead for p in partners.get(e.id, ())):
                continue
            ru, rv = uf.find(e.u), uf.find(e.v)
            if ru == rv:
                continue
            if e.w == best.get(ru) or e.w == best.get(rv):
                uf.union(ru, rv)
                contracted.append(e.id)
                changed = True
                break
    return uf, contracted


def rst_solve(
    inst: RstInstance,
    node_limit: Optional[int] = None,
    contract: bool = True,
    stats: Optional[SearchStats] = None,
) -> Optional[TreeCertificate]:
    """Find a feasible tree or prove none exists.

    Branching picks the component with the fewest usable crossing edges and
    tries each such edge in turn, excluding the earlier ones; every spanning
    tree crosses that cut, so the branches partition the search space.
    Raises SearchBudgetExceeded when more than ``node_limit`` branches are
    opened.
    """
    if node_limit is None:
        node_limit = default_node_limit()
    if stats is None:
        stats = SearchStats()
    g = inst.graph
    partners = inst.partners()
    if g.n == 0:
        return None
    if g.n == 1:
        return TreeCertificate(frozenset())

    if contract:
        uf0, fixed = _contract_safe_edges(inst, partners)
    else:
        uf0, fixed = UnionFind(g.n), []
    stats.contracted = len(fixed)
    base_cost = sum(g.edges[e].w for e in fixed)
    if base_cost > inst.budget:
        return None

    # Relabel contracted components 0..k-1 and keep edges between distinct ones.
    roots = sorted({uf0.find(x) for x in range(g.n)})
    comp = {r: i for i, r in enumerate(roots)}
    k = len(roots)
    edges = [
        (e.id, comp[uf0.find(e.u)], comp[uf0.find(e.v)], e.w)
        for e in g.edges
        if uf0.find(e.u) != uf0.find(e.v)
    ]
    if k == 1:
        return TreeCertificate(frozenset(fixed))
    min_w = min((w for _, _, _, w in edges), default=0)
    live_ids = {eid for eid, *_ in edges}
    conflicts = {eid: partners.get(eid, set()) & live_ids for eid in live_ids}

    def search(parent: list[int], chosen: list[int], banned: frozenset[int], cost: int, ncomp: int):
        if ncomp == 1:
            return list(chosen)

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        usable = [(eid, find(a), find(b), w) for eid, a, b, w in edges
                  if eid not in banned and find(a) != find(b)]
        # all components must still be joinable with usable edges
        probe = UnionFind(k)
        for _, a, b, _ in usable:
            probe.union(a, b)
        roots_left = {probe.find(find(x)) for x in range(k)}
        if len(roots_left) != 1:
            return None

        crossing: dict[int, list[tuple[int, int, int, int]]] = {}
        for item in usable:
            crossing.setdefault(item[1], []).append(item)
            crossing.setdefault(item[2], []).append(item)
        pivot = min(crossing, key=lambda c: (len(crossing[c]), c))
        options = sorted(crossing[pivot], key=lambda it: (it[3], it[0]))

        excluded: list[int] = []
        for eid, a, b, w in options:
            stats.nodes += 1
            if stats.nodes > node_limit:
                raise SearchBudgetExceeded(node_limit)
            if cost + w + (ncomp - 2) * min_w <= inst.budget:
                child = list(parent)
                child[find(b)] = find(a)
                found = search(child, chosen + [eid],
                               banned | frozenset(excluded) | conflicts[eid],
                               cost + w, ncomp - 1)
                if found is not None:
                    return found
            excluded.append(eid)
        return None

    tree = search(list(range(k)), [], frozenset(), base_cost, k)
    if tree is None:
        return None
    return TreeCertificate(frozenset(fixed) | frozenset(tree))


def rst_extract(labels: RstLabels, cert: TreeCertificate, num_vars: Optional[int] = None) -> Assignment:
    """Set every literal labelling a tree edge true; everything else false."""
    if num_vars is None:
        num_vars = labels.num_vars
    forced: dict[int, bool] = {}
    for eid in sorted(cert.edges):
        lit = labels.edge_literals.get(eid)
        if lit is None:
            continue
        want = not lit.negated
        if forced.get(lit.var, want) != want:
            raise InconsistentCertificate(f"tree uses both x{lit.var} and ~x{lit.var}")
        forced[lit.var] = want
    return Assignment(tuple(forced.get(i, False) for i in range(1, num_vars + 1)))


def canonical_tree(inst: RstInstance, labels: RstLabels, choices: Iterable[int]) -> TreeCertificate:
    """Tree using top-bottom, every top-literal edge, and one labelled edge per clause.

    ``choices[j]`` is the literal position (0..2) used for clause j.
    """
    by_clause: dict[int, list[int]] = {}
    for eid in sorted(labels.clause_of_edge):
        by_clause.setdefault(labels.clause_of_edge[eid], []).append(eid)
    edges = {e.id for e in inst.graph.edges
             if Role.TOP in (inst.graph.roles[e.u], inst.graph.roles[e.v])
             and e.id not in labels.edge_literals}
    for j, pos in enumerate(choices):
        edges.add(by_clause[j][pos])
    return TreeCertificate(frozenset(edges))
