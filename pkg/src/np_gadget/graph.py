"""Graph and network data model shared by the three reductions.

Edges and arcs carry dense integer ids equal to their position in the edge
list, so forbidden pairs, all-or-nothing sets and certificates can refer to
them unambiguously.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .errors import GraphError, UnknownEdgeId


class Role(str, enum.Enum):
    GENERIC = "generic"
    TOP = "top"
    BOTTOM = "bottom"
    SOURCE = "source"
    SINK = "sink"
    EXCESS = "excess"
    VAR_HUB = "var_hub"
    LITERAL = "literal"
    CLAUSE_POS = "clause_pos"
    CLAUSE_OUT = "clause_out"
    VAR_IN = "var_in"
    VAR_OUT = "var_out"
    VAR_POS = "var_pos"
    VAR_NEG = "var_neg"


def _check_roles(n: int, roles: Sequence[Role]) -> tuple[Role, ...]:
    if not roles:
        return (Role.GENERIC,) * n
    roles = tuple(Role(r) for r in roles)
    if len(roles) != n:
        raise GraphError(f"{len(roles)} roles given for {n} vertices")
    return roles


def _check_ids(items) -> None:
    for i, item in enumerate(items):
        if item.id != i:
            raise GraphError(f"edge ids must be dense 0..m-1; position {i} has id {item.id}")


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.components = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        self.components -= 1
        return True


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    w: int = 1

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


@dataclass(frozen=True)
class UGraph:
    """Undirected multigraph with nonnegative integer edge weights."""

    n: int
    edges: tuple[Edge, ...]
    roles: tuple[Role, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "roles", _check_roles(self.n, self.roles))
        _check_ids(self.edges)
        for e in self.edges:
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise GraphError(f"edge {e.id} has endpoint outside 0..{self.n - 1}")
            if e.u == e.v:
                raise GraphError(f"edge {e.id} is a self-loop")
            if e.w < 0:
                raise GraphError(f"edge {e.id} has negative weight")

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> list[list[tuple[int, int]]]:
        """adjacency[x] lists (neighbour, edge id) in edge-id order."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for e in self.edges:
            adj[e.u].append((e.v, e.id))
            adj[e.v].append((e.u, e.id))
        return adj

    def edge(self, eid: int) -> Edge:
        if not isinstance(eid, int) or not 0 <= eid < len(self.edges):
            raise UnknownEdgeId(eid)
        return self.edges[eid]


@dataclass(frozen=True)
class Arc:
    id: int
    tail: int
    head: int
    cap: int


@dataclass(frozen=True)
class CapNetwork:
    n: int
    arcs: tuple[Arc, ...]
    source: int
    sink: int
    roles: tuple[Role, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(self.arcs))
        object.__setattr__(self, "roles", _check_roles(self.n, self.roles))
        _check_ids(self.arcs)
        if not (0 <= self.source < self.n and 0 <= self.sink < self.n) or self.source == self.sink:
            raise GraphError("source and sink must be distinct vertices")
        for a in self.arcs:
            if not (0 <= a.tail < self.n and 0 <= a.head < self.n) or a.tail == a.head:
                raise GraphError(f"arc {a.id} has bad endpoints")
            if a.cap < 0:
                raise GraphError(f"arc {a.id} has negative capacity")
            if a.head == self.source:
                raise GraphError(f"arc {a.id} enters the source")
            if a.tail == self.sink:
                raise GraphError(f"arc {a.id} leaves the sink")

    def arc(self, aid: int) -> Arc:
        if not isinstance(aid, int) or not 0 <= aid < len(self.arcs):
            raise UnknownEdgeId(aid)
        return self.arcs[aid]

    def with_caps(self, caps: Mapping[int, int]) -> CapNetwork:
        """Copy with some arc capacities replaced."""
        arcs = tuple(Arc(a.id, a.tail, a.head, caps.get(a.id, a.cap)) for a in self.arcs)
        return CapNetwork(self.n, arcs, self.source, self.sink, self.roles)


@dataclass(frozen=True)
class SparseVec:
    """Nonnegative integer vector; ``entries`` holds only the nonzero coordinates.

    For a formula over V variables, coordinates 0..V-1 are e_1..e_V and
    V..2V-1 are their barred counterparts.
    """

    dim: int
    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        items = self.entries.items() if isinstance(self.entries, Mapping) else self.entries
        clean = {}
        for c, x in items:
            c, x = int(c), int(x)
            if not 0 <= c < self.dim:
                raise GraphError(f"coordinate {c} outside dimension {self.dim}")
            if x < 0:
                raise GraphError(f"negative entry {x} at coordinate {c}")
            if x:
                clean[c] = clean.get(c, 0) + x
        object.__setattr__(self, "entries", tuple(sorted(clean.items())))

    @classmethod
    def unit(cls, dim: int, coord: int, scale: int = 1) -> SparseVec:
        return cls(dim, ((coord, scale),))

    @classmethod
    def zero(cls, dim: int) -> SparseVec:
        return cls(dim)

    def __getitem__(self, coord: int) -> int:
        return dict(self.entries).get(coord, 0)

    def __add__(self, other: SparseVec) -> SparseVec:
        if other.dim != self.dim:
            raise GraphError("dimension mismatch")
        return SparseVec(self.dim, self.entries + other.entries)

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def norm2(self) -> int:
        return sum(x * x for _, x in self.entries)

    def total(self) -> int:
        return sum(x for _, x in self.entries)


@dataclass(frozen=True)
class VEdge:
    id: int
    u: int
    v: int
    w: SparseVec

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


@dataclass(frozen=True)
class VGraph:
    """Simple undirected graph with vector edge weights of a common dimension."""

    n: int
    edges: tuple[VEdge, ...]
    dim: int
    roles: tuple[Role, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "roles", _check_roles(self.n, self.roles))
        _check_ids(self.edges)
        seen = set()
        for e in self.edges:
            if not (0 <= e.u < self.n and 0 <= e.v < self.n) or e.u == e.v:
                raise GraphError(f"edge {e.id} has bad endpoints")
            if e.w.dim != self.dim:
                raise GraphError(f"edge {e.id} weight has dim {e.w.dim}, graph has {self.dim}")
            key = frozenset((e.u, e.v))
            if key in seen:
                raise GraphError(f"parallel edge {e.id} between {e.u} and {e.v}")
            seen.add(key)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for e in self.edges:
            adj[e.u].append((e.v, e.id))
            adj[e.v].append((e.u, e.id))
        return adj

    @cached_property
    def edge_between(self) -> dict[tuple[int, int], VEdge]:
        out = {}
        for e in self.edges:
            out[(e.u, e.v)] = e
            out[(e.v, e.u)] = e
        return out


def is_spanning_tree(g: UGraph, tree: Iterable[int]) -> bool:
    ids = set(tree)
    for eid in ids:
        g.edge(eid)
    if len(ids) != g.n - 1:
        return False
    uf = UnionFind(g.n)
    for eid in ids:
        e = g.edges[eid]
        if not uf.union(e.u, e.v):
            return False
    return uf.components == 1


def is_simple_path(g, path: Sequence[int]) -> bool:
    """True iff ``path`` is a nonempty vertex sequence, consecutive vertices adjacent, no repeats."""
    if not path:
        return False
    if any(not isinstance(x, int) or not 0 <= x < g.n for x in path):
        return False
    if len(set(path)) != len(path):
        return False
    adj = g.adjacency
    for a, b in zip(path, path[1:]):
        if not any(nb == b for nb, _ in adj[a]):
            return False
    return True


def tree_cost(g: UGraph, tree: Iterable[int]) -> int:
    return sum(g.edge(eid).w for eid in tree)


def path_edges(g: UGraph, path: Sequence[int]) -> Optional[list[int]]:
    """Lightest edge id joining each consecutive pair, or None if some pair is not adjacent."""
    out = []
    adj = g.adjacency
    for a, b in zip(path, path[1:]):
        best = None
        for nb, eid in adj[a]:
            if nb == b and (best is None or g.edges[eid].w < g.edges[best].w):
                best = eid
        if best is None:
            return None
        out.append(best)
    return out
