"""Graph patterns and homomorphism search.

A pattern is a small directed graph whose vertices and edges are both
variables.  A match assigns every variable an object of the data graph so
that labels agree and every pattern edge ``(u)-[e]->(w)`` lands on a data
edge from the image of ``u`` to the image of ``w``.  Matches are
homomorphisms: two variables may be sent to the same object.

The search is a backtracking join over a static plan.  Seeded variables
come first, then the most selective unbound vertex (fewest label
candidates), and from there the plan grows along pattern edges so that
each new vertex is reached through the adjacency lists of a bound one.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field

from ggd.errors import PatternError, SeedKindMismatch
from ggd.graph import EDGE, VERTEX, ObjectId, PropertyGraph

WILDCARD = "-"

Binding = dict[str, ObjectId]


def label_matches(pattern_label: str, object_labels) -> bool:
    return pattern_label == WILDCARD or pattern_label in object_labels


@dataclass(frozen=True)
class PatternEdge:
    var: str
    src: str
    dst: str


@dataclass(frozen=True)
class GraphPattern:
    vertex_vars: tuple[str, ...] = ()
    edge_vars: tuple[PatternEdge, ...] = ()
    labels: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertex_vars", tuple(self.vertex_vars))
        object.__setattr__(self, "edge_vars", tuple(
            e if isinstance(e, PatternEdge) else PatternEdge(*e) for e in self.edge_vars
        ))
        names = list(self.vertex_vars) + [e.var for e in self.edge_vars]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise PatternError(f"variable names must be unique, repeated: {', '.join(dupes)}")
        declared = set(self.vertex_vars)
        for e in self.edge_vars:
            for end in (e.src, e.dst):
                if end not in declared:
                    raise PatternError(f"edge variable {e.var!r} references undeclared vertex {end!r}")
        labels = {v: self.labels.get(v, WILDCARD) for v in names}
        extra = set(self.labels) - set(names)
        if extra:
            raise PatternError(f"labels given for unknown variables: {', '.join(sorted(extra))}")
        object.__setattr__(self, "labels", labels)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.vertex_vars + tuple(e.var for e in self.edge_vars)

    def kind_of(self, var: str) -> str | None:
        if var in self.vertex_vars:
            return VERTEX
        if any(e.var == var for e in self.edge_vars):
            return EDGE
        return None

    def edge(self, var: str) -> PatternEdge:
        for e in self.edge_vars:
            if e.var == var:
                return e
        raise KeyError(var)

    def is_empty(self) -> bool:
        return not self.vertex_vars and not self.edge_vars

    def __len__(self) -> int:
        return len(self.vertex_vars) + len(self.edge_vars)

    def __hash__(self) -> int:
        return hash((self.vertex_vars, self.edge_vars, tuple(sorted(self.labels.items()))))


# plan steps: (op, ...) tuples keep the inner loop free of attribute lookups
_SCAN = 0      # (SCAN, var, label, need_out, need_in)
_EXPAND = 1    # (EXPAND, edge_var, edge_label, from_var, to_var, to_label, outgoing)
_BETWEEN = 2   # (BETWEEN, edge_var, edge_label, src_var, dst_var)


def _candidate_count(graph: PropertyGraph, label: str) -> int:
    if label == WILDCARD:
        return len(graph._vertices)
    return len(graph._vertex_label_index.get(label, ()))


def _plan(pattern: GraphPattern, graph: PropertyGraph, bound: set[str]) -> list[tuple]:
    labels = pattern.labels
    bound = set(bound)
    pending = [e for e in pattern.edge_vars if e.var not in bound]
    steps: list[tuple] = []

    def close_edges() -> None:
        for e in list(pending):
            if e.src in bound and e.dst in bound:
                steps.append((_BETWEEN, e.var, labels[e.var], e.src, e.dst))
                pending.remove(e)
                bound.add(e.var)

    out_needed = {v: False for v in pattern.vertex_vars}
    in_needed = dict(out_needed)
    for e in pattern.edge_vars:
        out_needed[e.src] = True
        in_needed[e.dst] = True

    close_edges()
    order = {v: i for i, v in enumerate(pattern.vertex_vars)}
    while any(v not in bound for v in pattern.vertex_vars):
        frontier = []
        for e in pending:
            if e.src in bound and e.dst not in bound:
                frontier.append((e, e.dst, True))
            elif e.dst in bound and e.src not in bound:
                frontier.append((e, e.src, False))
        if frontier:
            e, new, outgoing = min(
                frontier,
                key=lambda f: (_candidate_count(graph, labels[f[1]]), order[f[1]]),
            )
            from_var = e.src if outgoing else e.dst
            steps.append((_EXPAND, e.var, labels[e.var], from_var, new, labels[new], outgoing))
            pending.remove(e)
            bound.update((e.var, new))
        else:
            new = min(
                (v for v in pattern.vertex_vars if v not in bound),
                key=lambda v: (_candidate_count(graph, labels[v]), order[v]),
            )
            steps.append((_SCAN, new, labels[new], out_needed[new], in_needed[new]))
            bound.add(new)
        close_edges()
    return steps


def _prepare_seed(pattern: GraphPattern, graph: PropertyGraph, seed: Mapping[str, ObjectId]):
    """Check the seed against the pattern and derive endpoint bindings of seeded edges.

    Returns the initial assignment, or ``None`` when the seed cannot be
    extended at all.
    """
    assignment: dict[str, ObjectId] = {}
    for var, oid in seed.items():
        kind = pattern.kind_of(var)
        if kind is None:
            raise SeedKindMismatch(f"seed variable {var!r} does not occur in the pattern")
        if not isinstance(oid, ObjectId) or oid.kind != kind:
            raise SeedKindMismatch(f"seed variable {var!r} is a {kind} variable, got {oid!r}")
        assignment[var] = oid
    for var, oid in list(assignment.items()):
        if oid not in graph or not label_matches(pattern.labels[var], graph.labels(oid)):
            return None
        if oid.kind == EDGE:
            e = pattern.edge(var)
            src, dst = graph.endpoints(oid)
            for end_var, end in ((e.src, src), (e.dst, dst)):
                if assignment.setdefault(end_var, end) != end:
                    return None
    for var, oid in assignment.items():
        if oid.kind == VERTEX and not label_matches(pattern.labels[var], graph.labels(oid)):
            return None
    return assignment


def _search(graph: PropertyGraph, steps: list[tuple], depth: int, asg: dict) -> Iterator[None]:
    if depth == len(steps):
        yield None
        return
    step = steps[depth]
    op = step[0]
    labels_of = graph._labels
    nxt = depth + 1
    if op == _SCAN:
        _, var, label, need_out, need_in = step
        candidates = graph._vertices if label == WILDCARD else graph._vertex_label_index.get(label, ())
        out_adj, in_adj = graph._out, graph._in
        for vid in candidates:
            if need_out and not out_adj[vid]:
                continue
            if need_in and not in_adj[vid]:
                continue
            asg[var] = vid
            yield from _search(graph, steps, nxt, asg)
        asg.pop(var, None)
    elif op == _EXPAND:
        _, evar, elabel, from_var, to_var, to_label, outgoing = step
        origin = asg[from_var]
        endpoints = graph._endpoints
        edges = graph._out[origin] if outgoing else graph._in[origin]
        any_elabel = elabel == WILDCARD
        any_vlabel = to_label == WILDCARD
        for eid in edges:
            if not any_elabel and elabel not in labels_of[eid]:
                continue
            src, dst = endpoints[eid]
            other = dst if outgoing else src
            if not any_vlabel and to_label not in labels_of[other]:
                continue
            asg[evar] = eid
            asg[to_var] = other
            yield from _search(graph, steps, nxt, asg)
        asg.pop(evar, None)
        asg.pop(to_var, None)
    else:
        _, evar, elabel, src_var, dst_var = step
        src, dst = asg[src_var], asg[dst_var]
        endpoints = graph._endpoints
        any_elabel = elabel == WILDCARD
        for eid in graph._out[src]:
            if endpoints[eid][1] != dst:
                continue
            if not any_elabel and elabel not in labels_of[eid]:
                continue
            asg[evar] = eid
            yield from _search(graph, steps, nxt, asg)
        asg.pop(evar, None)


def _enumerate(pattern: GraphPattern, graph: PropertyGraph, assignment: dict[str, ObjectId]) -> Iterator[Binding]:
    steps = _plan(pattern, graph, set(assignment))
    order = pattern.variables
    for _ in _search(graph, steps, 0, assignment):
        yield {v: assignment[v] for v in order}


def find_matches(pattern: GraphPattern, graph: PropertyGraph) -> Iterator[Binding]:
    """Yield every homomorphism of ``pattern`` into ``graph`` exactly once.

    The empty pattern has exactly one match, the empty binding.  Order is
    deterministic for a given graph construction order.
    """
    return _enumerate(pattern, graph, {})


def find_matches_seeded(
    pattern: GraphPattern, graph: PropertyGraph, seed: Mapping[str, ObjectId]
) -> Iterator[Binding]:
    """Yield the matches of ``pattern`` that agree with ``seed``.

    Every seed variable must be declared in the pattern with the same kind
    as the object it is bound to, otherwise :class:`SeedKindMismatch`.
    """
    assignment = _prepare_seed(pattern, graph, seed)  # validate eagerly, not on first next()
    return _enumerate(pattern, graph, assignment) if assignment is not None else iter(())


def count_matches(pattern: GraphPattern, graph: PropertyGraph) -> int:
    return sum(1 for _ in find_matches(pattern, graph))
