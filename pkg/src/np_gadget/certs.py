"""Certificates and verification reports for the three target problems."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional


class Reason(str, enum.Enum):
    NOT_SPANNING_TREE = "NotSpanningTree"
    FORBIDDEN_PAIR = "ForbiddenPair"
    COST_EXCEEDED = "CostExceeded"
    CAPACITY_VIOLATED = "CapacityViolated"
    NOT_ALL_OR_NOTHING = "NotAllOrNothing"
    CONSERVATION_VIOLATED = "ConservationViolated"
    BELOW_TARGET = "BelowTarget"
    EMPTY_PATH = "EmptyPath"
    UNKNOWN_VERTEX = "UnknownVertex"
    WRONG_ENDPOINT = "WrongEndpoint"
    NOT_SIMPLE = "NotSimple"
    NOT_ADJACENT = "NotAdjacent"


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of a certificate check.

    ``value`` is the tree cost, flow value or squared path cost, whichever
    applies; ``detail`` names the first violated condition on rejection.
    """

    accepted: bool
    value: Optional[int] = None
    reason: Optional[Reason] = None
    detail: str = ""

    def __bool__(self):
        return self.accepted

    def summary(self) -> str:
        if self.accepted:
            return f"Accept (value {self.value})"
        extra = f": {self.detail}" if self.detail else ""
        return f"Reject({self.reason.value}){extra} (value {self.value})"


def accept(value: int) -> VerifyReport:
    return VerifyReport(True, value)


def reject(reason: Reason, value: Optional[int] = None, detail: str = "") -> VerifyReport:
    return VerifyReport(False, value, reason, detail)


@dataclass(frozen=True)
class TreeCertificate:
    edges: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(self.edges))

    @classmethod
    def of(cls, edges: Iterable[int]) -> TreeCertificate:
        return cls(frozenset(edges))


@dataclass(frozen=True)
class FlowCertificate:
    """Arc id -> flow. Zero entries are dropped; missing arcs carry 0."""

    flow: tuple[tuple[int, int], ...]

    def __init__(self, flow: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = flow.items() if isinstance(flow, Mapping) else flow
        clean = {}
        for k, v in items:
            if v:
                clean[k] = clean.get(k, 0) + v
        object.__setattr__(self, "flow", tuple(sorted(clean.items())))

    def __getitem__(self, arc_id: int) -> int:
        return self.as_dict().get(arc_id, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.flow)

    def with_flow(self, arc_id: int, value: int) -> FlowCertificate:
        d = self.as_dict()
        d[arc_id] = value
        return FlowCertificate(d)


@dataclass(frozen=True)
class PathCertificate:
    vertices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    def __len__(self):
        return len(self.vertices)


@dataclass
class SearchStats:
    """Counters filled in by the solvers; purely informational."""

    nodes: int = 0
    patterns: int = 0
    contracted: int = 0
