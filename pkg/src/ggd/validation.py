"""Deciding whether a graph satisfies a set of GGDs.

For each rule, every source match that passes the source constraints is
used as a seed for the target pattern; the rule holds for that match as
soon as one seeded target match passes the target constraints.  Matches
for which no such extension exists are reported as :class:`Violation`
records, in the matcher's enumeration order.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ggd.constraints import DistanceRegistry, check_constraint_set, default_registry
from ggd.errors import RuleError
from ggd.graph import ObjectId, PropertyGraph
from ggd.pattern import Binding, find_matches, find_matches_seeded
from ggd.rules import GGD

log = logging.getLogger(__name__)

NO_TARGET_MATCH = "no_target_match"
TARGET_CONSTRAINTS_FAILED = "target_constraints_failed"


@dataclass(frozen=True)
class Violation:
    ggd_name: str
    source_binding: Mapping[str, ObjectId]
    reason: str
    inspected_targets: int
    missing_properties: tuple[str, ...] = ()
    graph_version: int = 0


@dataclass(frozen=True)
class TargetCheck:
    satisfied: bool
    inspected: int
    missing: tuple[str, ...] = ()
    witness: Binding | None = None


@dataclass
class RuleResult:
    name: str
    violations: list[Violation] = field(default_factory=list)
    source_matches: int = 0
    source_satisfied: int = 0
    targets_inspected: int = 0
    error: RuleError | None = None

    @property
    def holds(self) -> bool:
        return self.error is None and not self.violations

    @property
    def verdict(self) -> str:
        if self.error is not None:
            return "error"
        return "holds" if not self.violations else "violated"


@dataclass
class ValidationReport:
    results: list[RuleResult] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.results)

    @property
    def has_errors(self) -> bool:
        return any(r.error is not None for r in self.results)

    @property
    def violations(self) -> list[Violation]:
        return [v for r in self.results for v in r.violations]

    def __getitem__(self, name: str) -> RuleResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)


def target_seed(ggd: GGD, source_binding: Mapping[str, ObjectId]) -> dict[str, ObjectId]:
    return {v: source_binding[v] for v in ggd.target.variables if v in source_binding}


def check_target(
    graph: PropertyGraph,
    ggd: GGD,
    source_binding: Mapping[str, ObjectId],
    registry: DistanceRegistry | None = None,
) -> TargetCheck:
    """Look for a seeded target match of ``source_binding`` satisfying the target constraints.

    Stops at the first satisfying match.  ``missing`` collects the
    properties whose absence made target constraints fail.
    """
    inspected = 0
    missing: list[str] = []
    for target_binding in find_matches_seeded(ggd.target, graph, target_seed(ggd, source_binding)):
        inspected += 1
        merged = {**source_binding, **target_binding}
        ok, _, absent = check_constraint_set(ggd.target_constraints, merged, graph, registry)
        if ok:
            return TargetCheck(True, inspected, witness=merged)
        missing.extend(m for m in absent if m not in missing)
    return TargetCheck(False, inspected, tuple(missing))


def iter_source_matches(
    graph: PropertyGraph, ggd: GGD, registry: DistanceRegistry | None = None
) -> Iterator[tuple[Binding, bool]]:
    for binding in find_matches(ggd.source, graph):
        ok, _, _ = check_constraint_set(ggd.source_constraints, binding, graph, registry)
        yield binding, ok


def _check_rule(graph: PropertyGraph, ggd: GGD, registry: DistanceRegistry) -> RuleResult:
    result = RuleResult(ggd.name)
    for binding, ok in iter_source_matches(graph, ggd, registry):
        result.source_matches += 1
        if not ok:
            continue
        result.source_satisfied += 1
        check = check_target(graph, ggd, binding, registry)
        result.targets_inspected += check.inspected
        if not check.satisfied:
            reason = NO_TARGET_MATCH if check.inspected == 0 else TARGET_CONSTRAINTS_FAILED
            result.violations.append(
                Violation(ggd.name, binding, reason, check.inspected, check.missing, graph.version)
            )
    return result


def validate_ggd(
    graph: PropertyGraph, ggd: GGD, registry: DistanceRegistry | None = None
) -> tuple[bool, list[Violation]]:
    """Return ``(holds, violations)`` for a single rule.

    Rule errors (unknown distance, variant mismatch) propagate.
    """
    result = _check_rule(graph, ggd, registry or default_registry())
    return result.holds, result.violations


def validate_set(
    graph: PropertyGraph,
    rules: Sequence[GGD],
    registry: DistanceRegistry | None = None,
    parallelism: int = 1,
) -> ValidationReport:
    """Validate every rule; a rule error is recorded on its result and the
    remaining rules are still checked.  Results keep declaration order
    whatever ``parallelism`` is."""
    registry = registry or default_registry()

    def run(ggd: GGD) -> RuleResult:
        try:
            return _check_rule(graph, ggd, registry)
        except RuleError as exc:
            log.warning("rule %s could not be evaluated: %s", ggd.name, exc)
            return RuleResult(ggd.name, error=exc)

    if parallelism > 1 and len(rules) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(run, rules))
    else:
        results = [run(r) for r in rules]
    return ValidationReport(results)
