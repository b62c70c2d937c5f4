"""Classical polynomial algorithms: Prim, Dijkstra, Edmonds-Karp.

These solve the unrestricted versions of the three problems. The solvers in
the reduction modules reuse the max-flow core below.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .certs import FlowCertificate
from .errors import Disconnected, GraphError
from .graph import CapNetwork, Edge, UGraph, VGraph


def prim_mst(g: UGraph) -> tuple[frozenset[int], int]:
    """Minimum spanning tree as (edge ids, total weight)."""
    if g.n == 0:
        return frozenset(), 0
    adj = g.adjacency
    in_tree = [False] * g.n
    in_tree[0] = True
    heap = [(g.edges[eid].w, eid, nb) for nb, eid in adj[0]]
    heapq.heapify(heap)
    chosen = []
    cost = 0
    while heap and len(chosen) < g.n - 1:
        w, eid, x = heapq.heappop(heap)
        if in_tree[x]:
            continue
        in_tree[x] = True
        chosen.append(eid)
        cost += w
        for nb, nid in adj[x]:
            if not in_tree[nb]:
                heapq.heappush(heap, (g.edges[nid].w, nid, nb))
    if len(chosen) != g.n - 1:
        raise Disconnected(f"graph is disconnected: reached {len(chosen) + 1} of {g.n} vertices")
    return frozenset(chosen), cost


@dataclass(frozen=True)
class ShortestPath:
    cost: int
    path: tuple[int, ...]


def dijkstra(g: UGraph, u: int, v: int) -> Optional[ShortestPath]:
    """Cheapest u-v path, or None when v is unreachable."""
    for x in (u, v):
        if not 0 <= x < g.n:
            raise GraphError(f"vertex {x} out of range")
    dist = {u: 0}
    prev: dict[int, int] = {}
    heap = [(0, u)]
    done = set()
    while heap:
        d, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        if x == v:
            break
        for nb, eid in g.adjacency[x]:
            nd = d + g.edges[eid].w
            if nd < dist.get(nb, nd + 1):
                dist[nb] = nd
                prev[nb] = x
                heapq.heappush(heap, (nd, nb))
    if v not in done:
        return None
    path = [v]
    while path[-1] != u:
        path.append(prev[path[-1]])
    return ShortestPath(dist[v], tuple(reversed(path)))


def scalarize(g: VGraph) -> UGraph:
    """Collapse vector weights to the sum of their coordinates."""
    return UGraph(g.n, tuple(Edge(e.id, e.u, e.v, e.w.total()) for e in g.edges), g.roles)


# -- max flow ------------------------------------------------------------------

def augment_to_max(
    n: int,
    tails: Sequence[int],
    heads: Sequence[int],
    low: Sequence[int],
    cap: Sequence[int],
    flow: list[int],
    s: int,
    t: int,
) -> int:
    """Push flow along shortest augmenting paths until none remain.

    ``flow`` must already satisfy ``low <= flow <= cap`` and is updated in
    place. Residual capacity is ``cap - flow`` forward and ``flow - low``
    backward. Returns the amount added.
    """
    out_arcs: list[list[int]] = [[] for _ in range(n)]
    in_arcs: list[list[int]] = [[] for _ in range(n)]
    for i, (a, b) in enumerate(zip(tails, heads)):
        out_arcs[a].append(i)
        in_arcs[b].append(i)

    added = 0
    while True:
        # parent[x] = (arc index, +1 forward / -1 backward)
        parent: list[Optional[tuple[int, int]]] = [None] * n
        seen = [False] * n
        seen[s] = True
        queue = deque([s])
        while queue and not seen[t]:
            x = queue.popleft()
            for i in out_arcs[x]:
                y = heads[i]
                if not seen[y] and cap[i] - flow[i] > 0:
                    seen[y] = True
                    parent[y] = (i, 1)
                    queue.append(y)
            for i in in_arcs[x]:
                y = tails[i]
                if not seen[y] and flow[i] - low[i] > 0:
                    seen[y] = True
                    parent[y] = (i, -1)
                    queue.append(y)
        if not seen[t]:
            return added

        bottleneck = None
        x = t
        while x != s:
            i, d = parent[x]
            r = cap[i] - flow[i] if d > 0 else flow[i] - low[i]
            bottleneck = r if bottleneck is None else min(bottleneck, r)
            x = tails[i] if d > 0 else heads[i]
        x = t
        while x != s:
            i, d = parent[x]
            flow[i] += d * bottleneck
            x = tails[i] if d > 0 else heads[i]
        added += bottleneck


def edmonds_karp(net: CapNetwork):
    """Integral maximum s-t flow. Returns (value, FlowCertificate)."""
    tails = [a.tail for a in net.arcs]
    heads = [a.head for a in net.arcs]
    caps = [a.cap for a in net.arcs]
    flow = [0] * len(caps)
    value = augment_to_max(net.n, tails, heads, [0] * len(caps), caps, flow, net.source, net.sink)
    return value, FlowCertificate({a.id: f for a, f in zip(net.arcs, flow)})
