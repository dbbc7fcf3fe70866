"""Reading and writing ``.graph.json`` documents.

Shape::

    {"vertices": [{"id": "v1", "labels": ["person"], "properties": {"name": "Ann"}}],
     "edges":    [{"id": "e1", "src": "v1", "dst": "v2", "labels": ["knows"], "properties": {}}]}

External ids are kept on the graph (:meth:`PropertyGraph.external_id`).
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from typing import Any

from ggd.errors import DanglingEdge, DuplicateId, GraphFormatError, InvalidValue
from ggd.graph import PropertyGraph


def _reject_constant(name: str):
    raise GraphFormatError(f"non-finite number {name} is not a valid property value")


def _strings(entry: Mapping, field: str, where: str) -> list[str]:
    labels = entry.get(field, [])
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise GraphFormatError(f"{where}: {field!r} must be a list of strings")
    return labels


def _properties(entry: Mapping, where: str) -> dict[str, Any]:
    props = entry.get("properties", {})
    if not isinstance(props, dict):
        raise GraphFormatError(f"{where}: 'properties' must be an object")
    return props


def _id(entry: Mapping, where: str) -> str:
    oid = entry.get("id")
    if not isinstance(oid, str):
        raise GraphFormatError(f"{where}: 'id' must be a string")
    return oid


def parse_graph_file(text: str) -> PropertyGraph:
    """Build a :class:`PropertyGraph` from a JSON graph document."""
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise GraphFormatError("graph document must be a JSON object")
    vertices = doc.get("vertices", [])
    edges = doc.get("edges", [])
    if not isinstance(vertices, list) or not isinstance(edges, list):
        raise GraphFormatError("'vertices' and 'edges' must be arrays")

    graph = PropertyGraph()
    for i, entry in enumerate(vertices):
        where = f"vertices[{i}]"
        if not isinstance(entry, dict):
            raise GraphFormatError(f"{where}: must be an object")
        name = _id(entry, where)
        try:
            graph.add_vertex(_strings(entry, "labels", where), _properties(entry, where), name=name)
        except InvalidValue as exc:
            raise GraphFormatError(f"{where}: {exc}") from None
    for i, entry in enumerate(edges):
        where = f"edges[{i}]"
        if not isinstance(entry, dict):
            raise GraphFormatError(f"{where}: must be an object")
        name = _id(entry, where)
        if graph.find(name) is not None:
            raise DuplicateId(f"{where}: duplicate object id {name!r}")
        ends = []
        for field in ("src", "dst"):
            ref = entry.get(field)
            oid = graph.find(ref) if isinstance(ref, str) else None
            if oid is None or not graph.has_vertex(oid):
                raise DanglingEdge(f"{where}: {field} {ref!r} is not a vertex id")
            ends.append(oid)
        try:
            graph.add_edge(ends[0], ends[1], _strings(entry, "labels", where), _properties(entry, where), name=name)
        except InvalidValue as exc:
            raise GraphFormatError(f"{where}: {exc}") from None
    return graph


def graph_to_dict(graph: PropertyGraph) -> dict[str, list]:
    def entry(oid) -> dict[str, Any]:
        props = graph.properties(oid)
        return {
            "id": graph.external_id(oid),
            "labels": sorted(graph.labels(oid)),
            "properties": {k: props[k] for k in sorted(props)},
        }

    vertices = [entry(v) for v in graph.vertices]
    edges = []
    for e in graph.edges:
        item = entry(e)
        src, dst = graph.endpoints(e)
        edges.append({
            "id": item["id"],
            "src": graph.external_id(src),
            "dst": graph.external_id(dst),
            "labels": item["labels"],
            "properties": item["properties"],
        })
    return {"vertices": vertices, "edges": edges}


def serialize_graph(graph: PropertyGraph) -> str:
    """Deterministic JSON text: objects in id order, labels and keys sorted."""
    return json.dumps(graph_to_dict(graph), indent=2, ensure_ascii=False, allow_nan=False) + "\n"
