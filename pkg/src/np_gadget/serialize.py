"""JSON round-tripping for instances, certificates and labels; DOT export.

Integer-keyed maps are written with string keys, as JSON requires. Documents
are validated structurally with jsonschema and then semantically (ids in
range, edges dense); either failure raises SchemaError carrying a path such
as ``$.edges[3].w``.
"""

from __future__ import annotations

import json
from typing import Any, Optional, Union

import jsonschema

from .certs import FlowCertificate, PathCertificate, TreeCertificate
from .cnf import Literal
from .errors import GadgetError, SchemaError
from .flow import FlowInstance, FlowLabels
from .graph import Arc, CapNetwork, Edge, Role, SparseVec, UGraph, VEdge, VGraph
from .rst import RstInstance, RstLabels
from .vvsp import VvspInstance, VvspLabels

Instance = Union[RstInstance, FlowInstance, VvspInstance]
Certificate = Union[TreeCertificate, FlowCertificate, PathCertificate]
Labels = Union[RstLabels, FlowLabels, VvspLabels]

_NAT = {"type": "integer", "minimum": 0}
_ID_MAP = {"type": "object", "patternProperties": {"^[0-9]+$": _NAT}, "additionalProperties": False}
_ROLES = {"type": "array", "items": {"enum": [r.value for r in Role]}}
_LITERAL = {
    "type": "object",
    "properties": {"var": {"type": "integer", "minimum": 1}, "negated": {"type": "boolean"}},
    "required": ["var", "negated"],
}
_PAIR = {
    "type": "object",
    "properties": {"pos": _NAT, "neg": _NAT},
    "required": ["pos", "neg"],
}

SCHEMAS: dict[str, dict] = {
    "rst": {
        "type": "object",
        "properties": {
            "problem": {"const": "rst"},
            "num_vertices": _NAT,
            "edges": {"type": "array", "items": {
                "type": "object",
                "properties": {"id": _NAT, "u": _NAT, "v": _NAT, "w": _NAT},
                "required": ["id", "u", "v", "w"],
            }},
            "forbidden": {"type": "array", "items": {
                "type": "array", "items": _NAT, "minItems": 2, "maxItems": 2}},
            "budget": _NAT,
            "big_weight": {"type": ["integer", "null"]},
            "roles": _ROLES,
        },
        "required": ["problem", "num_vertices", "edges", "forbidden", "budget"],
    },
    "flow": {
        "type": "object",
        "properties": {
            "problem": {"const": "flow"},
            "num_vertices": _NAT,
            "arcs": {"type": "array", "items": {
                "type": "object",
                "properties": {"id": _NAT, "from": _NAT, "to": _NAT, "cap": _NAT},
                "required": ["id", "from", "to", "cap"],
            }},
            "source": _NAT,
            "sink": _NAT,
            "all_or_nothing": {"type": "array", "items": _NAT},
            "target": _NAT,
            "roles": _ROLES,
        },
        "required": ["problem", "num_vertices", "arcs", "source", "sink", "all_or_nothing", "target"],
    },
    "vvsp": {
        "type": "object",
        "properties": {
            "problem": {"const": "vvsp"},
            "num_vertices": _NAT,
            "dim": _NAT,
            "edges": {"type": "array", "items": {
                "type": "object",
                "properties": {"id": _NAT, "u": _NAT, "v": _NAT, "w": _ID_MAP},
                "required": ["id", "u", "v", "w"],
            }},
            "source": _NAT,
            "target": _NAT,
            "budget_sq": _NAT,
            "big_weight": {"type": ["integer", "null"]},
            "roles": _ROLES,
        },
        "required": ["problem", "num_vertices", "dim", "edges", "source", "target", "budget_sq"],
    },
    "tree": {
        "type": "object",
        "properties": {"tree": {"type": "array", "items": _NAT}},
        "required": ["tree"],
    },
    "flow_cert": {
        "type": "object",
        "properties": {"flow": {
            "type": "object",
            "patternProperties": {"^[0-9]+$": {"type": "integer"}},
            "additionalProperties": False,
        }},
        "required": ["flow"],
    },
    "path": {
        "type": "object",
        "properties": {"path": {"type": "array", "items": {"type": "integer"}}},
        "required": ["path"],
    },
    "labels": {
        "type": "object",
        "properties": {
            "problem": {"enum": ["rst", "flow", "vvsp"]},
            "num_vars": {"type": "integer", "minimum": 1},
            "edge_literals": {"type": "object",
                              "patternProperties": {"^[0-9]+$": _LITERAL},
                              "additionalProperties": False},
            "var_gadget_edges": {"type": "object",
                                 "patternProperties": {"^[0-9]+$": _PAIR},
                                 "additionalProperties": False},
            "var_gadget_vertices": {"type": "object",
                                    "patternProperties": {"^[0-9]+$": _PAIR},
                                    "additionalProperties": False},
            "clause_of_edge": _ID_MAP,
            "clause_arcs": _ID_MAP,
        },
        "required": ["problem", "num_vars", "edge_literals", "var_gadget_edges"],
    },
}


def _path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _validate(doc: Any, schema_name: str) -> None:
    try:
        jsonschema.validate(doc, SCHEMAS[schema_name])
    except jsonschema.ValidationError as exc:
        raise SchemaError(_path(exc.absolute_path), exc.message) from None


# -- encoding --------------------------------------------------------------------

def _roles(roles) -> list[str]:
    return [r.value for r in roles]


def to_dict(obj) -> dict:
    if isinstance(obj, RstInstance):
        g = obj.graph
        return {
            "problem": "rst",
            "num_vertices": g.n,
            "edges": [{"id": e.id, "u": e.u, "v": e.v, "w": e.w} for e in g.edges],
            "forbidden": [list(p) for p in sorted(obj.forbidden)],
            "budget": obj.budget,
            "big_weight": obj.big_weight,
            "roles": _roles(g.roles),
        }
    if isinstance(obj, FlowInstance):
        net = obj.net
        return {
            "problem": "flow",
            "num_vertices": net.n,
            "arcs": [{"id": a.id, "from": a.tail, "to": a.head, "cap": a.cap} for a in net.arcs],
            "source": net.source,
            "sink": net.sink,
            "all_or_nothing": sorted(obj.all_or_nothing),
            "target": obj.target,
            "roles": _roles(net.roles),
        }
    if isinstance(obj, VvspInstance):
        g = obj.graph
        return {
            "problem": "vvsp",
            "num_vertices": g.n,
            "dim": g.dim,
            "edges": [{"id": e.id, "u": e.u, "v": e.v, "w": {str(c): x for c, x in e.w.entries}}
                      for e in g.edges],
            "source": obj.source,
            "target": obj.target,
            "budget_sq": obj.budget_sq,
            "big_weight": obj.big_weight,
            "roles": _roles(g.roles),
        }
    if isinstance(obj, TreeCertificate):
        return {"tree": sorted(obj.edges)}
    if isinstance(obj, FlowCertificate):
        return {"flow": {str(k): v for k, v in obj.flow}}
    if isinstance(obj, PathCertificate):
        return {"path": list(obj.vertices)}
    if isinstance(obj, (RstLabels, FlowLabels, VvspLabels)):
        return _labels_to_dict(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _lits(m) -> dict:
    return {str(k): {"var": lit.var, "negated": lit.negated} for k, lit in sorted(m.items())}


def _pairs(m) -> dict:
    return {str(k): {"pos": p, "neg": n} for k, (p, n) in sorted(m.items())}


def _labels_to_dict(lab) -> dict:
    if isinstance(lab, RstLabels):
        return {
            "problem": "rst",
            "num_vars": lab.num_vars,
            "edge_literals": _lits(lab.edge_literals),
            "var_gadget_edges": {},
            "clause_of_edge": {str(k): v for k, v in sorted(lab.clause_of_edge.items())},
        }
    if isinstance(lab, FlowLabels):
        return {
            "problem": "flow",
            "num_vars": lab.num_vars,
            "edge_literals": _lits(lab.edge_literals),
            "var_gadget_edges": _pairs(lab.dashed_of_var),
            "clause_arcs": {str(k): v for k, v in sorted(lab.clause_arc.items())},
        }
    return {
        "problem": "vvsp",
        "num_vars": lab.num_vars,
        "edge_literals": _lits(lab.clause_edge_literals),
        "var_gadget_edges": _pairs(lab.var_gadget_edges),
        "var_gadget_vertices": _pairs(lab.var_gadget),
    }


def to_json(obj, indent: Optional[int] = None) -> str:
    return json.dumps(to_dict(obj), indent=indent, sort_keys=False)


# -- decoding --------------------------------------------------------------------

def _int_keys(d: dict) -> dict:
    return {int(k): v for k, v in d.items()}


def _check_dense(items: list, where: str) -> None:
    for i, item in enumerate(items):
        if item["id"] != i:
            raise SchemaError(f"$.{where}[{i}].id", f"ids must be dense 0..m-1, expected {i}")


def _check_vertices(doc: dict, items: list, where: str, keys) -> None:
    n = doc["num_vertices"]
    for i, item in enumerate(items):
        for k in keys:
            if item[k] >= n:
                raise SchemaError(f"$.{where}[{i}].{k}", f"vertex {item[k]} >= num_vertices {n}")


def _build(fn, path: str):
    try:
        return fn()
    except GadgetError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(path, str(exc)) from None


def instance_from_dict(doc: Any) -> Instance:
    if not isinstance(doc, dict) or doc.get("problem") not in ("rst", "flow", "vvsp"):
        raise SchemaError("$.problem", "expected one of 'rst', 'flow', 'vvsp'")
    kind = doc["problem"]
    _validate(doc, kind)
    roles = tuple(doc.get("roles", ()))
    if kind == "rst":
        _check_dense(doc["edges"], "edges")
        _check_vertices(doc, doc["edges"], "edges", ("u", "v"))
        m = len(doc["edges"])
        for i, pair in enumerate(doc["forbidden"]):
            for k, eid in enumerate(pair):
                if eid >= m:
                    raise SchemaError(f"$.forbidden[{i}][{k}]", f"unknown edge id {eid}")
        g = _build(lambda: UGraph(doc["num_vertices"],
                                  tuple(Edge(e["id"], e["u"], e["v"], e["w"]) for e in doc["edges"]),
                                  roles), "$.edges")
        return _build(lambda: RstInstance(g, frozenset(tuple(p) for p in doc["forbidden"]),
                                          doc["budget"], doc.get("big_weight")), "$.forbidden")
    if kind == "flow":
        _check_dense(doc["arcs"], "arcs")
        _check_vertices(doc, doc["arcs"], "arcs", ("from", "to"))
        m = len(doc["arcs"])
        for i, aid in enumerate(doc["all_or_nothing"]):
            if aid >= m:
                raise SchemaError(f"$.all_or_nothing[{i}]", f"unknown arc id {aid}")
        net = _build(lambda: CapNetwork(doc["num_vertices"],
                                        tuple(Arc(a["id"], a["from"], a["to"], a["cap"]) for a in doc["arcs"]),
                                        doc["source"], doc["sink"], roles), "$.arcs")
        return FlowInstance(net, frozenset(doc["all_or_nothing"]), doc["target"])
    _check_dense(doc["edges"], "edges")
    _check_vertices(doc, doc["edges"], "edges", ("u", "v"))
    dim = doc["dim"]
    for i, e in enumerate(doc["edges"]):
        for c in e["w"]:
            if int(c) >= dim:
                raise SchemaError(f"$.edges[{i}].w.{c}", f"coordinate {c} >= dim {dim}")
    g = _build(lambda: VGraph(doc["num_vertices"],
                              tuple(VEdge(e["id"], e["u"], e["v"], SparseVec(dim, _int_keys(e["w"])))
                                    for e in doc["edges"]),
                              dim, roles), "$.edges")
    return _build(lambda: VvspInstance(g, doc["source"], doc["target"], doc["budget_sq"],
                                       doc.get("big_weight")), "$")


def certificate_from_dict(doc: Any, instance: Optional[Instance] = None) -> Certificate:
    """Decode a certificate; with ``instance`` given, also check ids against it."""
    if not isinstance(doc, dict):
        raise SchemaError("$", "certificate must be a JSON object")
    if "tree" in doc:
        _validate(doc, "tree")
        cert = TreeCertificate(frozenset(doc["tree"]))
        if isinstance(instance, RstInstance):
            for i, eid in enumerate(doc["tree"]):
                if eid >= instance.graph.m:
                    raise SchemaError(f"$.tree[{i}]", f"unknown edge id {eid}")
        elif instance is not None:
            raise SchemaError("$", "tree certificate given for a non-rst instance")
        return cert
    if "flow" in doc:
        _validate(doc, "flow_cert")
        flow = _int_keys(doc["flow"])
        if isinstance(instance, FlowInstance):
            for aid in flow:
                if aid >= len(instance.net.arcs):
                    raise SchemaError(f"$.flow.{aid}", f"unknown arc id {aid}")
        elif instance is not None:
            raise SchemaError("$", "flow certificate given for a non-flow instance")
        return FlowCertificate(flow)
    if "path" in doc:
        _validate(doc, "path")
        if isinstance(instance, VvspInstance):
            for i, x in enumerate(doc["path"]):
                if not 0 <= x < instance.graph.n:
                    raise SchemaError(f"$.path[{i}]", f"unknown vertex {x}")
        elif instance is not None:
            raise SchemaError("$", "path certificate given for a non-vvsp instance")
        return PathCertificate(tuple(doc["path"]))
    raise SchemaError("$", "expected one of the keys 'tree', 'flow', 'path'")


def labels_from_dict(doc: Any) -> Labels:
    _validate(doc, "labels")
    lits = {int(k): Literal(v["var"], v["negated"]) for k, v in doc["edge_literals"].items()}
    pairs = {int(k): (v["pos"], v["neg"]) for k, v in doc["var_gadget_edges"].items()}
    kind = doc["problem"]
    if kind == "rst":
        return RstLabels(doc["num_vars"], lits, _int_keys(doc.get("clause_of_edge", {})))
    if kind == "flow":
        return FlowLabels(doc["num_vars"], pairs, _int_keys(doc.get("clause_arcs", {})), lits)
    if "var_gadget_vertices" not in doc:
        raise SchemaError("$.var_gadget_vertices", "required for vvsp labels")
    verts = {int(k): (v["pos"], v["neg"]) for k, v in doc["var_gadget_vertices"].items()}
    return VvspLabels(doc["num_vars"], verts, lits, pairs)


def from_json(text: Union[str, bytes, dict], instance: Optional[Instance] = None):
    """Decode any document produced by :func:`to_json`, dispatching on its keys."""
    if isinstance(text, dict):
        doc = text
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected a JSON object")
    if "edge_literals" in doc:
        return labels_from_dict(doc)
    if "problem" in doc:
        return instance_from_dict(doc)
    return certificate_from_dict(doc, instance)


# -- DOT -------------------------------------------------------------------------

def _lit_label(lit: Literal) -> str:
    return f"~x{lit.var}" if lit.negated else f"x{lit.var}"


def to_dot(instance: Instance, labels: Optional[Labels] = None) -> str:
    """Graphviz text. Expensive edges are bold, all-or-nothing arcs dashed."""
    lits: dict[int, Literal] = {}
    if isinstance(labels, RstLabels):
        lits = labels.edge_literals
    elif isinstance(labels, FlowLabels):
        lits = labels.edge_literals
    elif isinstance(labels, VvspLabels):
        lits = labels.clause_edge_literals

    lines = []
    if isinstance(instance, FlowInstance):
        net = instance.net
        lines.append("digraph flow {")
        for v in range(net.n):
            lines.append(f'  n{v} [label="{v}:{net.roles[v].value}"];')
        for a in net.arcs:
            attrs = [f'label="{_lit_label(lits[a.id]) + " " if a.id in lits else ""}c={a.cap}"']
            if a.id in instance.all_or_nothing:
                attrs.append("style=dashed")
            lines.append(f"  n{a.tail} -> n{a.head} [{', '.join(attrs)}];")
    elif isinstance(instance, RstInstance):
        g = instance.graph
        lines.append("graph rst {")
        for v in range(g.n):
            lines.append(f'  n{v} [label="{v}:{g.roles[v].value}"];')
        heavy = instance.big_weight if instance.big_weight is not None else None
        for e in g.edges:
            text = _lit_label(lits[e.id]) if e.id in lits else ""
            bold = (e.w == heavy) if heavy is not None else e.w > 1
            if bold:
                text = "*"
            attrs = [f'label="{text}"', f"weight={e.w}"]
            if bold:
                attrs.append("style=bold")
            lines.append(f"  n{e.u} -- n{e.v} [{', '.join(attrs)}];")
    else:
        g = instance.graph
        lines.append("graph vvsp {")
        for v in range(g.n):
            lines.append(f'  n{v} [label="{v}:{g.roles[v].value}"];')
        for e in g.edges:
            w = " ".join(f"{c}:{x}" for c, x in e.w.entries)
            text = _lit_label(lits[e.id]) + " " + w if e.id in lits else w
            attrs = [f'label="{text.strip()}"']
            if instance.big_weight is not None and any(x == instance.big_weight for _, x in e.w.entries):
                attrs.append("style=bold")
            lines.append(f"  n{e.u} -- n{e.v} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
