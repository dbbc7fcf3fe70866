"""In-memory property graph.

Vertices and edges are disjoint object sets told apart by ``ObjectId.kind``.
Every object carries a (possibly empty) set of labels and a partial map of
property values.  Objects are never removed; ids are handed out from
per-kind counters and never reused.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping
from typing import NamedTuple, Union

from ggd.errors import DuplicateId, InvalidValue, UnknownEndpoint, UnknownObject

VERTEX = "vertex"
EDGE = "edge"

Value = Union[str, int, float, bool]

GENERATED_PREFIX = "_gen_"


class ObjectId(NamedTuple):
    kind: str
    index: int

    def __repr__(self) -> str:
        return f"{self.kind[0]}{self.index}"


def value_variant(value: object) -> str:
    """Return the variant name of a property value.

    ``bool`` is checked before ``int`` because it is a subclass of it.
    """
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, float):
        return "real"
    if isinstance(value, str):
        return "text"
    raise InvalidValue(f"unsupported property value {value!r} ({type(value).__name__})")


def check_value(value: object) -> Value:
    variant = value_variant(value)
    if variant == "real" and not math.isfinite(value):  # type: ignore[arg-type]
        raise InvalidValue(f"non-finite real value {value!r}")
    return value  # type: ignore[return-value]


class PropertyGraph:
    """Directed multigraph with labelled, attributed vertices and edges.

    Self-loops and parallel edges are allowed.  Each object also has an
    external id (the string used in graph files and reports); objects added
    without one get ``_gen_<n>`` from a sequential counter.
    """

    def __init__(self) -> None:
        self._vertices: list[ObjectId] = []
        self._edges: list[ObjectId] = []
        self._labels: dict[ObjectId, frozenset[str]] = {}
        self._properties: dict[ObjectId, dict[str, Value]] = {}
        self._endpoints: dict[ObjectId, tuple[ObjectId, ObjectId]] = {}
        self._out: dict[ObjectId, list[ObjectId]] = {}
        self._in: dict[ObjectId, list[ObjectId]] = {}
        self._vertex_label_index: dict[str, list[ObjectId]] = {}
        self._edge_label_index: dict[str, list[ObjectId]] = {}
        self._names: dict[ObjectId, str] = {}
        self._by_name: dict[str, ObjectId] = {}
        self._gen_counter = 0
        self.version = 0

    # construction -------------------------------------------------------

    def add_vertex(
        self,
        labels: Iterable[str] = (),
        properties: Mapping[str, Value] | None = None,
        *,
        name: str | None = None,
    ) -> ObjectId:
        vid = ObjectId(VERTEX, len(self._vertices))
        self._register(vid, labels, properties, name)
        self._vertices.append(vid)
        self._out[vid] = []
        self._in[vid] = []
        for label in self._labels[vid]:
            self._vertex_label_index.setdefault(label, []).append(vid)
        return vid

    def add_edge(
        self,
        src: ObjectId,
        dst: ObjectId,
        labels: Iterable[str] = (),
        properties: Mapping[str, Value] | None = None,
        *,
        name: str | None = None,
    ) -> ObjectId:
        for end in (src, dst):
            if not self.has_vertex(end):
                raise UnknownEndpoint(f"edge endpoint {end!r} is not a vertex of this graph")
        eid = ObjectId(EDGE, len(self._edges))
        self._register(eid, labels, properties, name)
        self._edges.append(eid)
        self._endpoints[eid] = (src, dst)
        self._out[src].append(eid)
        self._in[dst].append(eid)
        for label in self._labels[eid]:
            self._edge_label_index.setdefault(label, []).append(eid)
        return eid

    def _register(self, oid, labels, properties, name) -> None:
        # validate everything before touching state so a failed add leaves no trace
        label_set = frozenset(labels)
        for label in label_set:
            if not isinstance(label, str):
                raise InvalidValue(f"label {label!r} is not a string")
        props = {}
        for key, value in (properties or {}).items():
            if not isinstance(key, str):
                raise InvalidValue(f"property key {key!r} is not a string")
            props[key] = check_value(value)
        if name is None:
            name = self._next_generated_name()
        elif name in self._by_name:
            raise DuplicateId(f"duplicate object id {name!r}")
        self._labels[oid] = label_set
        self._properties[oid] = props
        self._names[oid] = name
        self._by_name[name] = oid
        self.version += 1

    def _next_generated_name(self) -> str:
        while True:
            name = f"{GENERATED_PREFIX}{self._gen_counter}"
            self._gen_counter += 1
            if name not in self._by_name:
                return name

    # queries -------------------------------------------------------------

    @property
    def vertices(self) -> list[ObjectId]:
        return list(self._vertices)

    @property
    def edges(self) -> list[ObjectId]:
        return list(self._edges)

    def __len__(self) -> int:
        return len(self._vertices) + len(self._edges)

    def __contains__(self, oid: object) -> bool:
        return oid in self._labels

    def has_vertex(self, oid: object) -> bool:
        return isinstance(oid, ObjectId) and oid.kind == VERTEX and oid in self._labels

    def has_edge(self, oid: object) -> bool:
        return isinstance(oid, ObjectId) and oid.kind == EDGE and oid in self._labels

    def _check(self, oid: ObjectId) -> None:
        if oid not in self._labels:
            raise UnknownObject(f"{oid!r} is not in the graph")

    def labels(self, oid: ObjectId) -> frozenset[str]:
        self._check(oid)
        return self._labels[oid]

    def properties(self, oid: ObjectId) -> dict[str, Value]:
        """Return a copy of the property map of ``oid``."""
        self._check(oid)
        return dict(self._properties[oid])

    def get_property(self, oid: ObjectId, key: str) -> Value | None:
        """Value of ``key`` on ``oid``, or ``None`` when the property is undefined."""
        try:
            return self._properties[oid].get(key)
        except KeyError:
            raise UnknownObject(f"{oid!r} is not in the graph") from None

    def endpoints(self, eid: ObjectId) -> tuple[ObjectId, ObjectId]:
        try:
            return self._endpoints[eid]
        except KeyError:
            raise UnknownObject(f"{eid!r} is not an edge of the graph") from None

    def out_edges(self, vid: ObjectId) -> list[ObjectId]:
        return list(self._out[vid])

    def in_edges(self, vid: ObjectId) -> list[ObjectId]:
        return list(self._in[vid])

    def vertices_with_label(self, label: str) -> list[ObjectId]:
        return list(self._vertex_label_index.get(label, ()))

    def edges_with_label(self, label: str) -> list[ObjectId]:
        return list(self._edge_label_index.get(label, ()))

    def external_id(self, oid: ObjectId) -> str:
        self._check(oid)
        return self._names[oid]

    def lookup(self, name: str) -> ObjectId:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownObject(f"no object with id {name!r}") from None

    def find(self, name: str) -> ObjectId | None:
        return self._by_name.get(name)

    @property
    def external_ids(self) -> dict[str, ObjectId]:
        return dict(self._by_name)

    def iter_objects(self) -> Iterator[ObjectId]:
        yield from self._vertices
        yield from self._edges

    def copy(self) -> PropertyGraph:
        """Deep copy preserving ids, external ids and the generated-name counter."""
        other = PropertyGraph()
        for vid in self._vertices:
            other.add_vertex(self._labels[vid], self._properties[vid], name=self._names[vid])
        for eid in self._edges:
            src, dst = self._endpoints[eid]
            other.add_edge(src, dst, self._labels[eid], self._properties[eid], name=self._names[eid])
        other._gen_counter = self._gen_counter
        other.version = self.version
        return other

    def check_integrity(self) -> None:
        """Full scan of the referential invariants; raises on the first breach."""
        for eid, (src, dst) in self._endpoints.items():
            if not (self.has_vertex(src) and self.has_vertex(dst)):
                raise UnknownEndpoint(f"edge {eid!r} has a dangling endpoint")
        if set(self._labels) != set(self._vertices) | set(self._edges):
            raise UnknownObject("label map out of sync with object sets")

    def __repr__(self) -> str:
        return f"PropertyGraph(|V|={len(self._vertices)}, |E|={len(self._edges)})"
