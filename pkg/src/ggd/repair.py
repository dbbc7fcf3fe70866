"""Add-only repair of GGD violations.

A violated source match is fixed by instantiating the target pattern
around it: shared variables keep their source objects, every other target
variable becomes a new vertex or edge.  Property values of new objects
come only from *forcing* target constraints, i.e. threshold-0 equalities
(``op`` is ``=`` or ``<=``) against a constant or against a value that is
already known.  An identity ``y = x`` between a new variable and a bound
one reuses the bound object instead of creating a new one.

Before a plan is returned its target constraints are evaluated against
the planned objects.  Anything still failing (for example ``c = i`` over
two distinct existing vertices) makes the plan unrepairable; such plans
are reported and never applied.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from ggd.constraints import (
    Constraint,
    DistanceRegistry,
    Identity,
    VarConst,
    check_constraint_set,
    default_registry,
)
from ggd.errors import StaleViolation, UnrepairablePlan
from ggd.graph import EDGE, VERTEX, ObjectId, PropertyGraph, Value
from ggd.pattern import WILDCARD, label_matches
from ggd.rules import GGD
from ggd.validation import ValidationReport, Violation, check_target, validate_set

log = logging.getLogger(__name__)

_FORCING_OPS = ("=", "<=")


@dataclass(frozen=True)
class NewVertex:
    var: str
    labels: frozenset[str]
    properties: Mapping[str, Value]


@dataclass(frozen=True)
class NewEdge:
    var: str
    src: str
    dst: str
    labels: frozenset[str]
    properties: Mapping[str, Value]


@dataclass
class RepairPlan:
    ggd: GGD
    source_binding: Mapping[str, ObjectId]
    new_vertices: list[NewVertex] = field(default_factory=list)
    new_edges: list[NewEdge] = field(default_factory=list)
    # target variables resolved to objects that already exist
    resolved: dict[str, ObjectId] = field(default_factory=dict)
    unsatisfiable_constraints: list[Constraint] = field(default_factory=list)
    conflicts: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ggd_name(self) -> str:
        return self.ggd.name

    @property
    def repairable(self) -> bool:
        return not self.unsatisfiable_constraints and not self.conflicts

    @property
    def is_empty(self) -> bool:
        return not self.new_vertices and not self.new_edges


@dataclass(frozen=True)
class AppliedPlan:
    ggd_name: str
    source_binding: Mapping[str, ObjectId]
    created: Mapping[str, ObjectId]
    warnings: tuple[str, ...] = ()


@dataclass
class RepairOutcome:
    rounds_executed: int
    plans_applied: int
    unrepairable: list[RepairPlan]
    converged: bool
    log: list[AppliedPlan] = field(default_factory=list)
    report: ValidationReport | None = None

    @property
    def potential_non_termination(self) -> bool:
        return not self.converged


class _PlannedView:
    """Property lookup over the graph plus the not-yet-created objects of a plan."""

    def __init__(self, graph: PropertyGraph, fresh: Mapping[ObjectId, Mapping[str, Value]]):
        self.graph = graph
        self.fresh = fresh

    def get_property(self, oid: ObjectId, key: str) -> Value | None:
        if oid in self.fresh:
            return self.fresh[oid].get(key)
        return self.graph.get_property(oid, key)


def _resolve_existing(graph: PropertyGraph, ggd: GGD, source_binding: Mapping[str, ObjectId]) -> dict[str, ObjectId]:
    """Map target variables onto existing objects where the rule pins them down."""
    target = ggd.target
    resolved = {v: source_binding[v] for v in target.variables if v in source_binding}
    identities = [c for c in ggd.target_constraints if isinstance(c, Identity) and not c.negated]
    changed = True
    while changed:
        changed = False
        known = {**source_binding, **resolved}
        for c in identities:
            for var, other in ((c.var1, c.var2), (c.var2, c.var1)):
                if var in known or other not in known:
                    continue
                if target.kind_of(var) != known[other].kind:
                    continue  # stays fresh; the identity then fails verification
                resolved[var] = known[other]
                known[var] = known[other]
                changed = True
        for e in target.edge_vars:
            if e.var in resolved:
                src, dst = graph.endpoints(resolved[e.var])
                for end_var, end in ((e.src, src), (e.dst, dst)):
                    if end_var not in resolved:
                        resolved[end_var] = end
                        changed = True
    return resolved


def _synthesize(
    constraints: Sequence[Constraint],
    binding: Mapping[str, ObjectId],
    fresh: dict[ObjectId, dict[str, Value]],
    view: _PlannedView,
) -> None:
    changed = True
    while changed:
        changed = False
        for c in constraints:
            if isinstance(c, Identity) or c.op not in _FORCING_OPS or c.threshold != 0:
                continue
            if isinstance(c, VarConst):
                oid = binding[c.var]
                if oid in fresh and c.key not in fresh[oid]:
                    fresh[oid][c.key] = c.constant
                    changed = True
                continue
            sides = ((c.var1, c.key1, c.var2, c.key2), (c.var2, c.key2, c.var1, c.key1))
            for var, key, other_var, other_key in sides:
                oid = binding[var]
                if oid not in fresh or key in fresh[oid]:
                    continue
                value = view.get_property(binding[other_var], other_key)
                if value is not None:
                    fresh[oid][key] = value
                    changed = True


def build_plan(
    graph: PropertyGraph,
    ggd: GGD,
    source_binding: Mapping[str, ObjectId],
    registry: DistanceRegistry | None = None,
) -> RepairPlan:
    registry = registry or default_registry()
    target = ggd.target
    source_binding = dict(source_binding)
    plan = RepairPlan(ggd, source_binding)
    resolved = _resolve_existing(graph, ggd, source_binding)
    plan.resolved = resolved

    placeholders: dict[str, ObjectId] = {}
    for var in target.vertex_vars:
        if var not in resolved:
            placeholders[var] = ObjectId(VERTEX, -1 - len(placeholders))
    for e in target.edge_vars:
        if e.var not in resolved:
            placeholders[e.var] = ObjectId(EDGE, -1 - len(placeholders))
    binding = {**source_binding, **resolved, **placeholders}

    for var, oid in resolved.items():
        label = target.labels[var]
        if not label_matches(label, graph.labels(oid)):
            plan.conflicts.append(f"{var} is bound to {graph.external_id(oid)} which lacks label {label!r}")
    for e in target.edge_vars:
        if e.var in resolved and graph.endpoints(resolved[e.var]) != (binding[e.src], binding[e.dst]):
            plan.conflicts.append(f"edge {e.var} is bound to {graph.external_id(resolved[e.var])} with other endpoints")

    fresh: dict[ObjectId, dict[str, Value]] = {placeholders[v]: {} for v in placeholders}
    view = _PlannedView(graph, fresh)
    _synthesize(ggd.target_constraints, binding, fresh, view)
    ok, failed, _ = check_constraint_set(ggd.target_constraints, binding, view, registry)
    plan.unsatisfiable_constraints = failed

    for var in target.vertex_vars:
        if var in placeholders:
            plan.new_vertices.append(NewVertex(var, _labels(plan, var, target.labels[var]), fresh[placeholders[var]]))
    for e in target.edge_vars:
        if e.var in placeholders:
            plan.new_edges.append(NewEdge(e.var, e.src, e.dst, _labels(plan, e.var, target.labels[e.var]), fresh[placeholders[e.var]]))
    return plan


def _labels(plan: RepairPlan, var: str, label: str) -> frozenset[str]:
    if label == WILDCARD:
        plan.warnings.append(f"{var} has a wildcard label; generated object gets no labels")
        return frozenset()
    return frozenset({label})


def plan_repair(
    graph: PropertyGraph,
    ggd: GGD,
    violation: Violation,
    registry: DistanceRegistry | None = None,
) -> RepairPlan:
    """Plan the additions that make ``violation`` disappear.

    Raises :class:`StaleViolation` if the graph changed after the violation
    was produced.
    """
    if violation.graph_version != graph.version:
        raise StaleViolation(
            f"violation of {violation.ggd_name!r} was produced at graph version "
            f"{violation.graph_version}, graph is at {graph.version}"
        )
    if violation.ggd_name != ggd.name:
        raise ValueError(f"violation belongs to rule {violation.ggd_name!r}, not {ggd.name!r}")
    return build_plan(graph, ggd, violation.source_binding, registry)


def apply_plan(
    graph: PropertyGraph, plan: RepairPlan, registry: DistanceRegistry | None = None
) -> AppliedPlan | None:
    """Apply one plan, or return ``None`` if its source match is already satisfied."""
    if not plan.repairable:
        raise UnrepairablePlan(f"plan for {plan.ggd_name!r} is not repairable")
    for oid in list(plan.source_binding.values()) + list(plan.resolved.values()):
        if oid not in graph:
            raise StaleViolation(f"plan references {oid!r} which is not in the graph")
    if check_target(graph, plan.ggd, plan.source_binding, registry).satisfied:
        return None
    created: dict[str, ObjectId] = {}
    for nv in plan.new_vertices:
        created[nv.var] = graph.add_vertex(nv.labels, nv.properties)
    lookup = {**plan.source_binding, **plan.resolved, **created}
    for ne in plan.new_edges:
        created[ne.var] = graph.add_edge(lookup[ne.src], lookup[ne.dst], ne.labels, ne.properties)
    return AppliedPlan(plan.ggd_name, dict(plan.source_binding), created, tuple(plan.warnings))


def apply_plans(
    graph: PropertyGraph, plans: Sequence[RepairPlan], registry: DistanceRegistry | None = None
) -> tuple[PropertyGraph, int]:
    """Apply ``plans`` in order, skipping any whose source match is already satisfied."""
    applied = sum(1 for plan in plans if apply_plan(graph, plan, registry) is not None)
    return graph, applied


def _plans_for(graph: PropertyGraph, rules: Sequence[GGD], report: ValidationReport, registry) -> list[RepairPlan]:
    by_name = {r.name: r for r in rules}
    for result in report.results:
        if result.error is not None:
            raise result.error
    return [plan_repair(graph, by_name[v.ggd_name], v, registry) for v in report.violations]


def repair_to_fixpoint(
    graph: PropertyGraph,
    rules: Sequence[GGD],
    max_rounds: int = 10,
    registry: DistanceRegistry | None = None,
    parallelism: int = 1,
) -> RepairOutcome:
    """Alternate validation and plan application until nothing repairable is left.

    Mutates ``graph`` in place.  Stops after ``max_rounds`` applying rounds;
    ``converged`` is False when repairable violations remain at that point
    (typically a rule that keeps re-triggering itself on what it generates).
    Unrepairable plans never block the others; the outcome lists those still
    violated in the final graph.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be at least 1")
    registry = registry or default_registry()
    report = validate_set(graph, rules, registry, parallelism)
    plans = _plans_for(graph, rules, report, registry)
    rounds = applied_total = 0
    applied_log: list[AppliedPlan] = []
    converged = False
    while True:
        repairable = [p for p in plans if p.repairable]
        if not repairable:
            converged = True
            break
        if rounds == max_rounds:
            break
        rounds += 1
        round_applied = 0
        for plan in repairable:
            record = apply_plan(graph, plan, registry)
            if record is not None:
                applied_log.append(record)
                round_applied += 1
        applied_total += round_applied
        log.info("repair round %d applied %d of %d plans", rounds, round_applied, len(repairable))
        report = validate_set(graph, rules, registry, parallelism)
        plans = _plans_for(graph, rules, report, registry)
        if round_applied == 0:
            converged = not any(p.repairable for p in plans)
            break
    unrepairable = [p for p in plans if not p.repairable]
    return RepairOutcome(
        rounds_executed=max(rounds, 1),
        plans_applied=applied_total,
        unrepairable=unrepairable,
        converged=converged,
        log=applied_log,
        report=report,
    )
