"""Shortest path with vector-valued edge weights.

The graph is a chain: one diamond per variable (u_in -> u or u_bar -> u_out),
then one three-way fan per clause (a -> w_1..w_3 -> b). Entering u^i costs
M*e_i and entering u_bar^i costs M*e_bar_i; the clause edge for literal x_l
costs e_l and for ~x_l costs e_bar_l. Costs are compared as exact squared
norms against k^2 = V*M^2 + C^3, so nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .certs import PathCertificate, Reason, SearchStats, VerifyReport, accept, reject
from .cnf import Assignment, CnfInstance, Literal, evaluate
from .errors import BadM, GraphError, MalformedGadgetTraversal, NotAPath, NotSatisfying, SearchBudgetExceeded
from .graph import Role, SparseVec, VEdge, VGraph, is_simple_path
from .rst import default_node_limit


@dataclass(frozen=True)
class VvspInstance:
    graph: VGraph
    source: int
    target: int
    budget_sq: int
    big_weight: Optional[int] = None

    def __post_init__(self):
        for x in (self.source, self.target):
            if not 0 <= x < self.graph.n:
                raise GraphError(f"vertex {x} out of range")
        if self.budget_sq < 0:
            raise GraphError("budget_sq must be nonnegative")


@dataclass(frozen=True)
class VvspLabels:
    num_vars: int
    var_gadget: dict[int, tuple[int, int]]
    clause_edge_literals: dict[int, Literal]
    var_gadget_edges: dict[int, tuple[int, int]] = field(default_factory=dict)


def default_big_weight(num_clauses: int) -> int:
    c3 = num_clauses ** 3
    return (c3 + 1) // 2 + 1


def coordinate(lit: Literal, num_vars: int) -> int:
    return lit.var - 1 + (num_vars if lit.negated else 0)


def vvsp_build(cnf: CnfInstance, M: Optional[int] = None) -> tuple[VvspInstance, VvspLabels]:
    V, C = cnf.num_vars, cnf.num_clauses
    dim = 2 * V
    if M is None:
        M = default_big_weight(C)
    elif 2 * M <= C ** 3:
        raise BadM(f"M must exceed C^3/2 = {C ** 3 / 2}, got {M}")

    roles: list[Role] = []
    edges: list[VEdge] = []
    zero = SparseVec.zero(dim)

    def add(u, v, w=zero):
        edges.append(VEdge(len(edges), u, v, w))
        return edges[-1].id

    var_gadget = {}
    var_gadget_edges = {}
    prev_out = None
    for i in range(1, V + 1):
        u_in, u, ubar, u_out = 4 * (i - 1), 4 * (i - 1) + 1, 4 * (i - 1) + 2, 4 * (i - 1) + 3
        roles += [Role.VAR_IN, Role.VAR_POS, Role.VAR_NEG, Role.VAR_OUT]
        if prev_out is not None:
            add(prev_out, u_in)
        pos = add(u_in, u, SparseVec.unit(dim, i - 1, M))
        add(u, u_out)
        neg = add(u_in, ubar, SparseVec.unit(dim, V + i - 1, M))
        add(ubar, u_out)
        var_gadget[i] = (u, ubar)
        var_gadget_edges[i] = (pos, neg)
        prev_out = u_out

    clause_edge_literals = {}
    for j, clause in enumerate(cnf.clauses):
        a = 4 * V + 5 * j
        ws = [a + 1, a + 2, a + 3]
        b = a + 4
        roles += [Role.CLAUSE_POS] + [Role.LITERAL] * 3 + [Role.CLAUSE_OUT]
        add(prev_out, a)
        for w, lit in zip(ws, clause):
            eid = add(a, w, SparseVec.unit(dim, coordinate(lit, V)))
            clause_edge_literals[eid] = lit
            add(w, b)
        prev_out = b

    graph = VGraph(len(roles), tuple(edges), dim, tuple(roles))
    inst = VvspInstance(graph, 0, len(roles) - 1, V * M * M + C ** 3, M)
    return inst, VvspLabels(V, var_gadget, clause_edge_literals, var_gadget_edges)


def path_vector(g: VGraph, path: Sequence[int]) -> SparseVec:
    total: dict[int, int] = {}
    for a, b in zip(path, path[1:]):
        e = g.edge_between.get((a, b))
        if e is None:
            raise NotAPath(f"vertices {a} and {b} are not adjacent")
        for c, x in e.w.entries:
            total[c] = total.get(c, 0) + x
    return SparseVec(g.dim, total)


def path_cost2(inst: VvspInstance, p: PathCertificate) -> int:
    """Exact squared Euclidean norm of the summed edge weights along ``p``."""
    if not is_simple_path(inst.graph, p.vertices):
        raise NotAPath(f"{list(p.vertices)} is not a simple path")
    return path_vector(inst.graph, p.vertices).norm2()


def vvsp_verify(inst: VvspInstance, p: PathCertificate) -> VerifyReport:
    g = inst.graph
    vs = p.vertices
    if not vs:
        return reject(Reason.EMPTY_PATH)
    bad = [x for x in vs if not isinstance(x, int) or not 0 <= x < g.n]
    if bad:
        return reject(Reason.UNKNOWN_VERTEX, detail=f"vertices {bad} not in graph")
    if vs[0] != inst.source or vs[-1] != inst.target:
        return reject(Reason.WRONG_ENDPOINT,
                      detail=f"path runs {vs[0]} -> {vs[-1]}, need {inst.source} -> {inst.target}")
    if len(set(vs)) != len(vs):
        return reject(Reason.NOT_SIMPLE, detail="path repeats a vertex")
    for a, b in zip(vs, vs[1:]):
        if (a, b) not in g.edge_between:
            return reject(Reason.NOT_ADJACENT, detail=f"no edge between {a} and {b}")
    cost2 = path_vector(g, vs).norm2()
    if cost2 > inst.budget_sq:
        return reject(Reason.COST_EXCEEDED, cost2, f"cost^2 {cost2} > {inst.budget_sq}")
    return accept(cost2)


def _dfs(inst: VvspInstance, bound: list, stats: SearchStats, node_limit: int,
         strict: bool) -> Iterator[tuple[list[int], int]]:
    """Yield (path, cost^2) for simple source->target paths, pruning on ``bound[0]``.

    Squared cost never decreases when a path is extended (weights are
    nonnegative), so any prefix already over the bound can be dropped.
    ``strict`` prunes at >= bound instead of > bound. The caller may tighten
    ``bound[0]`` between yields; None disables pruning.
    """
    g = inst.graph
    adj = g.adjacency
    vec = [0] * g.dim
    path = [inst.source]
    on_path = [False] * g.n
    on_path[inst.source] = True

    def over(c):
        b = bound[0]
        return b is not None and (c >= b if strict else c > b)

    def rec(x, cost2):
        stats.nodes += 1
        if stats.nodes > node_limit:
            raise SearchBudgetExceeded(node_limit)
        if x == inst.target:
            yield list(path), cost2
            return
        for nb, eid in adj[x]:
            if on_path[nb]:
                continue
            w = g.edges[eid].w.entries
            new = cost2
            for c, val in w:
                new += 2 * vec[c] * val + val * val
            if over(new):
                continue
            for c, val in w:
                vec[c] += val
            on_path[nb] = True
            path.append(nb)
            yield from rec(nb, new)
            path.pop()
            on_path[nb] = False
            for c, val in w:
                vec[c] -= val

    yield from rec(inst.source, 0)


def vvsp_solve(inst: VvspInstance, node_limit: Optional[int] = None,
               stats: Optional[SearchStats] = None) -> Optional[PathCertificate]:
    """Depth-first search for a path within budget."""
    if node_limit is None:
        node_limit = default_node_limit()
    if stats is None:
        stats = SearchStats()
    for path, _ in _dfs(inst, [inst.budget_sq], stats, node_limit, strict=False):
        return PathCertificate(tuple(path))
    return None


def vvsp_min_cost2(inst: VvspInstance, node_limit: Optional[int] = None,
                   stats: Optional[SearchStats] = None) -> Optional[tuple[int, PathCertificate]]:
    """Exact minimum squared cost over all simple source->target paths (branch and bound)."""
    if node_limit is None:
        node_limit = default_node_limit()
    if stats is None:
        stats = SearchStats()
    bound: list = [None]
    best = None
    for path, cost2 in _dfs(inst, bound, stats, node_limit, strict=True):
        best = (cost2, PathCertificate(tuple(path)))
        bound[0] = cost2
    return best


def vvsp_extract(labels: VvspLabels, p: PathCertificate, num_vars: Optional[int] = None) -> Assignment:
    """x_i is true iff the path passes through the barred branch of gadget i."""
    if num_vars is None:
        num_vars = labels.num_vars
    on = set(p.vertices)
    values = []
    for i in range(1, num_vars + 1):
        u, ubar = labels.var_gadget[i]
        if (u in on) == (ubar in on):
            raise MalformedGadgetTraversal(f"path must pass exactly one branch of variable {i}")
        values.append(ubar in on)
    return Assignment(tuple(values))


def path_from_assignment(cnf: CnfInstance, a: Assignment,
                         choices: Optional[Sequence[int]] = None) -> PathCertificate:
    """Path whose variable branches encode ``a``.

    Each clause goes through its first true literal unless ``choices`` gives
    the literal position (0..2) per clause; a chosen literal must be true.
    """
    if not evaluate(cnf, a):
        raise NotSatisfying("assignment does not satisfy the formula")
    V = cnf.num_vars
    path = []
    for i in range(1, V + 1):
        base = 4 * (i - 1)
        path += [base, base + 2 if a[i] else base + 1, base + 3]
    for j, clause in enumerate(cnf.clauses):
        if choices is None:
            pos = next(k for k, lit in enumerate(clause) if lit.value(a))
        else:
            pos = choices[j]
            if not clause[pos].value(a):
                raise NotSatisfying(f"clause {j} position {pos} is false under the assignment")
        a_v = 4 * V + 5 * j
        path += [a_v, a_v + 1 + pos, a_v + 4]
    return PathCertificate(tuple(path))
