"""All-or-nothing maximum flow.

Network layout for a formula with V variables and C clauses: the source
feeds one hub per variable (capacity C); each hub has two all-or-nothing arcs
(capacity C) to its positive and negative literal vertices; every literal
vertex drains into an excess vertex ``l`` and into the clause positions where
it occurs; each clause's three positions meet in a clause vertex that sends 1
unit to the sink, and ``l`` sends VC - C to the sink.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .baselines import augment_to_max, edmonds_karp
from .certs import FlowCertificate, Reason, SearchStats, VerifyReport, accept, reject
from .cnf import Assignment, CnfInstance, Literal, evaluate
from .errors import AmbiguousVariable, GraphError, NotSatisfying, SearchBudgetExceeded
from .graph import Arc, CapNetwork, Role
from .rst import default_node_limit


@dataclass(frozen=True)
class FlowInstance:
    net: CapNetwork
    all_or_nothing: frozenset[int]
    target: int

    def __post_init__(self):
        object.__setattr__(self, "all_or_nothing", frozenset(self.all_or_nothing))
        for aid in self.all_or_nothing:
            self.net.arc(aid)
        if self.target < 0:
            raise GraphError("target must be nonnegative")


@dataclass(frozen=True)
class FlowLabels:
    num_vars: int
    dashed_of_var: dict[int, tuple[int, int]]
    clause_arc: dict[int, int]
    edge_literals: dict[int, Literal] = field(default_factory=dict)


def flow_build(cnf: CnfInstance) -> tuple[FlowInstance, FlowLabels]:
    V, C = cnf.num_vars, cnf.num_clauses
    big = V * C
    S, T, L = 0, 1, 2

    def hub(i):
        return 3 + (i - 1)

    def lit_vertex(lit: Literal):
        return 3 + V + 2 * (lit.var - 1) + (1 if lit.negated else 0)

    def pos_vertex(j, p):
        return 3 + 3 * V + 3 * j + p

    def out_vertex(j):
        return 3 + 3 * V + 3 * C + j

    n = 3 + 3 * V + 4 * C
    roles = ([Role.SOURCE, Role.SINK, Role.EXCESS] + [Role.VAR_HUB] * V + [Role.LITERAL] * (2 * V)
             + [Role.CLAUSE_POS] * (3 * C) + [Role.CLAUSE_OUT] * C)
    arcs: list[Arc] = []

    def add(a, b, cap):
        arcs.append(Arc(len(arcs), a, b, cap))
        return arcs[-1].id

    for i in range(1, V + 1):
        add(S, hub(i), C)
    dashed = {}
    for i in range(1, V + 1):
        pos = add(hub(i), lit_vertex(Literal(i, False)), C)
        neg = add(hub(i), lit_vertex(Literal(i, True)), C)
        dashed[i] = (pos, neg)
    for i in range(1, V + 1):
        for neg in (False, True):
            add(lit_vertex(Literal(i, neg)), L, big)
    clause_arc = {}
    edge_literals = {}
    for j, clause in enumerate(cnf.clauses):
        for p, lit in enumerate(clause):
            edge_literals[add(lit_vertex(lit), pos_vertex(j, p), big)] = lit
        for p in range(3):
            add(pos_vertex(j, p), out_vertex(j), big)
        clause_arc[j] = add(out_vertex(j), T, 1)
    add(L, T, big - C)

    net = CapNetwork(n, tuple(arcs), S, T, tuple(roles))
    A = frozenset(a for pair in dashed.values() for a in pair)
    return FlowInstance(net, A, big), FlowLabels(V, dashed, clause_arc, edge_literals)


def flow_value(net: CapNetwork, cert: FlowCertificate) -> int:
    f = cert.as_dict()
    out = sum(f.get(a.id, 0) for a in net.arcs if a.tail == net.source)
    back = sum(f.get(a.id, 0) for a in net.arcs if a.head == net.source)
    return out - back


def flow_verify(inst: FlowInstance, cert: FlowCertificate) -> VerifyReport:
    net = inst.net
    f = cert.as_dict()
    for aid in f:
        net.arc(aid)
    value = flow_value(net, cert)
    for a in net.arcs:
        x = f.get(a.id, 0)
        if x < 0 or x > a.cap:
            return reject(Reason.CAPACITY_VIOLATED, value, f"arc {a.id} carries {x}, capacity {a.cap}")
    for aid in sorted(inst.all_or_nothing):
        x, cap = f.get(aid, 0), net.arcs[aid].cap
        if x not in (0, cap):
            return reject(Reason.NOT_ALL_OR_NOTHING, value, f"arc {aid} carries {x}, must be 0 or {cap}")
    balance = [0] * net.n
    for a in net.arcs:
        x = f.get(a.id, 0)
        balance[a.tail] -= x
        balance[a.head] += x
    for v in range(net.n):
        if v not in (net.source, net.sink) and balance[v] != 0:
            return reject(Reason.CONSERVATION_VIOLATED, value, f"vertex {v} has imbalance {balance[v]}")
    if value < inst.target:
        return reject(Reason.BELOW_TARGET, value, f"value {value} < target {inst.target}")
    return accept(value)


# -- exact solver ----------------------------------------------------------------

def bounded_max_flow(net: CapNetwork, low: dict[int, int]) -> Optional[list[int]]:
    """Maximum flow subject to per-arc lower bounds, or None if infeasible.

    Feasibility goes through the usual circulation with a super source and
    super sink; the feasible flow is then pushed to a maximum with lower
    bounds respected in the residual graph.
    """
    m = len(net.arcs)
    tails = [a.tail for a in net.arcs]
    heads = [a.head for a in net.arcs]
    caps = [a.cap for a in net.arcs]
    lows = [low.get(a.id, 0) for a in net.arcs]
    if any(lo > c for lo, c in zip(lows, caps)):
        return None

    flow = list(lows)
    if any(lows):
        excess = [0] * net.n
        for i in range(m):
            excess[heads[i]] += lows[i]
            excess[tails[i]] -= lows[i]
        ss, tt = net.n, net.n + 1
        at = list(tails) + [net.sink]
        ah = list(heads) + [net.source]
        acap = [c - lo for c, lo in zip(caps, lows)] + [sum(caps)]
        need = 0
        for v, ex in enumerate(excess):
            if ex > 0:
                at.append(ss); ah.append(v); acap.append(ex)
                need += ex
            elif ex < 0:
                at.append(v); ah.append(tt); acap.append(-ex)
        aflow = [0] * len(acap)
        got = augment_to_max(net.n + 2, at, ah, [0] * len(acap), acap, aflow, ss, tt)
        if got != need:
            return None
        flow = [lows[i] + aflow[i] for i in range(m)]
    augment_to_max(net.n, tails, heads, lows, caps, flow, net.source, net.sink)
    return flow


def _groups(inst: FlowInstance, exhaustive: bool) -> list[list[tuple[int, ...]]]:
    """Candidate saturated subsets of A, grouped by tail vertex.

    Without ``exhaustive`` a subset is kept only if its total capacity fits
    through the tail's inbound capacity (a necessary condition for
    conservation). Subsets are ordered largest saturated capacity first.
    """
    net = inst.net
    A = sorted(inst.all_or_nothing)
    if exhaustive:
        return [[(a,), ()] for a in A]
    by_tail: dict[int, list[int]] = {}
    for aid in A:
        by_tail.setdefault(net.arcs[aid].tail, []).append(aid)
    inflow = [0] * net.n
    for a in net.arcs:
        inflow[a.head] += a.cap
    groups = []
    for tail in sorted(by_tail):
        ids = by_tail[tail]
        options = []
        for r in range(len(ids), -1, -1):
            for combo in itertools.combinations(ids, r):
                total = sum(net.arcs[a].cap for a in combo)
                if tail == net.source or total <= inflow[tail]:
                    options.append(combo)
        options.sort(key=lambda c: -sum(net.arcs[a].cap for a in c))
        groups.append(options)
    return groups


def flow_solve(
    inst: FlowInstance,
    node_limit: Optional[int] = None,
    exhaustive: bool = False,
    stats: Optional[SearchStats] = None,
) -> Optional[FlowCertificate]:
    """Search saturation patterns over A for a valid flow reaching the target.

    Partial patterns are pruned when the max flow with undecided arcs left
    free already falls short of the target. Each complete pattern fixes
    chosen arcs at capacity and the rest at zero, then maximises the flow.
    ``exhaustive`` switches to plain enumeration of all 2^|A| subsets.
    """
    if node_limit is None:
        node_limit = default_node_limit()
    if stats is None:
        stats = SearchStats()
    net = inst.net
    groups = _groups(inst, exhaustive)
    group_arcs = [sorted({a for opt in g for a in opt}) for g in groups]

    def relaxed_ok(decided_zero: set[int]) -> bool:
        value, _ = edmonds_karp(net.with_caps({a: 0 for a in decided_zero}))
        return value >= inst.target

    def search(level: int, saturated: list[int], zero: set[int]) -> Optional[FlowCertificate]:
        stats.nodes += 1
        if stats.nodes > node_limit:
            raise SearchBudgetExceeded(node_limit)
        if level == len(groups):
            stats.patterns += 1
            low = {a: net.arcs[a].cap for a in saturated}
            flow = bounded_max_flow(net.with_caps({a: 0 for a in zero}), low)
            if flow is None:
                return None
            cert = FlowCertificate({a.id: x for a, x in zip(net.arcs, flow)})
            return cert if flow_verify(inst, cert) else None
        for combo in groups[level]:
            new_zero = zero | (set(group_arcs[level]) - set(combo))
            if not exhaustive and not relaxed_ok(new_zero):
                continue
            found = search(level + 1, saturated + list(combo), new_zero)
            if found is not None:
                return found
        return None

    return search(0, [], set())


def flow_from_assignment(cnf: CnfInstance, a: Assignment) -> FlowCertificate:
    """The value-VC flow certifying a satisfying assignment.

    Each clause takes its unit from its first true literal; whatever a true
    literal vertex does not pass to clauses goes through ``l``.
    """
    if not evaluate(cnf, a):
        raise NotSatisfying("assignment does not satisfy the formula")
    inst, labels = flow_build(cnf)
    net = inst.net
    C = cnf.num_clauses
    excess_vertex = net.arcs[-1].tail
    to_excess = {arc.tail: arc.id for arc in net.arcs if arc.head == excess_vertex}
    out_of = {arc.tail: arc.id for arc in net.arcs if net.roles[arc.tail] == Role.CLAUSE_POS}
    f: dict[int, int] = {}

    for arc in net.arcs:
        if arc.tail == net.source:
            f[arc.id] = C
    for i in range(1, cnf.num_vars + 1):
        pos, neg = labels.dashed_of_var[i]
        f[pos if a[i] else neg] = C

    served: dict[int, int] = {}
    ordered = sorted(labels.edge_literals)  # three literal->position arcs per clause, in order
    for j in range(C):
        arc_id = next(x for x in ordered[3 * j: 3 * j + 3] if labels.edge_literals[x].value(a))
        arc = net.arcs[arc_id]
        f[arc_id] = 1
        f[out_of[arc.head]] = 1
        f[labels.clause_arc[j]] = 1
        served[arc.tail] = served.get(arc.tail, 0) + 1

    for i in range(1, cnf.num_vars + 1):
        pos, neg = labels.dashed_of_var[i]
        lit_v = net.arcs[pos if a[i] else neg].head
        f[to_excess[lit_v]] = C - served.get(lit_v, 0)
    f[net.arcs[-1].id] = cnf.num_vars * C - C
    return FlowCertificate(f)


def flow_extract(labels: FlowLabels, cert: FlowCertificate, num_vars: Optional[int] = None,
                 capacity: Optional[int] = None) -> Assignment:
    """x_i is true iff the positive all-or-nothing arc of variable i is saturated.

    ``capacity`` is the dashed-arc capacity C; it defaults to the number of
    clauses recorded in the labels.
    """
    if num_vars is None:
        num_vars = labels.num_vars
    if capacity is None:
        capacity = len(labels.clause_arc)
    values = []
    for i in range(1, num_vars + 1):
        pos, neg = labels.dashed_of_var[i]
        p, q = cert[pos] == capacity, cert[neg] == capacity
        if p == q:
            raise AmbiguousVariable(f"variable {i}: positive arc {cert[pos]}, negative arc {cert[neg]}")
        values.append(p)
    return Assignment(tuple(values))
