"""Deterministic JSON rendering of validation reports, repair logs and match listings."""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from typing import Any

from ggd.dsl import format_constraint
from ggd.graph import ObjectId, PropertyGraph
from ggd.repair import RepairOutcome
from ggd.validation import ValidationReport, Violation

MISSING_PROPERTY = "missing-property"


def _ids(graph: PropertyGraph, binding: Mapping[str, ObjectId], seen: dict[str, str]) -> dict[str, str]:
    out = {}
    for var, oid in binding.items():
        name = graph.external_id(oid)
        seen[name] = f"{oid.kind}:{oid.index}"
        out[var] = name
    return out


def _violation(graph: PropertyGraph, v: Violation, seen: dict[str, str]) -> dict[str, Any]:
    entry: dict[str, Any] = {
        "source_binding": _ids(graph, v.source_binding, seen),
        "reason": v.reason,
        "inspected_targets": v.inspected_targets,
    }
    if v.missing_properties:
        entry["annotations"] = [MISSING_PROPERTY]
        entry["missing_properties"] = list(v.missing_properties)
    return entry


def report_to_dict(
    report: ValidationReport,
    graph: PropertyGraph,
    repair: RepairOutcome | None = None,
) -> dict[str, Any]:
    seen: dict[str, str] = {}
    rules = []
    for result in report.results:
        entry: dict[str, Any] = {
            "name": result.name,
            "verdict": result.verdict,
            "counters": {
                "source_matches": result.source_matches,
                "source_satisfied": result.source_satisfied,
                "targets_inspected": result.targets_inspected,
            },
            "violations": [_violation(graph, v, seen) for v in result.violations],
        }
        if result.error is not None:
            entry["error"] = f"{type(result.error).__name__}: {result.error}"
        rules.append(entry)
    if report.has_errors:
        verdict = "error"
    else:
        verdict = "valid" if report.holds else "violated"
    doc: dict[str, Any] = {"verdict": verdict, "rules": rules}
    if repair is not None:
        doc["repair"] = {
            "converged": repair.converged,
            "potential_non_termination": repair.potential_non_termination,
            "rounds_executed": repair.rounds_executed,
            "plans_applied": repair.plans_applied,
            "applied": [
                {
                    "rule": a.ggd_name,
                    "source_binding": _ids(graph, a.source_binding, seen),
                    "created": _ids(graph, a.created, seen),
                }
                for a in repair.log
            ],
            "unrepairable": [
                {
                    "rule": p.ggd_name,
                    "source_binding": _ids(graph, p.source_binding, seen),
                    "blocking_constraints": [format_constraint(c) for c in p.unsatisfiable_constraints],
                    "conflicts": list(p.conflicts),
                }
                for p in repair.unrepairable
            ],
            "warnings": sorted({f"{a.ggd_name}: {w}" for a in repair.log for w in a.warnings}),
        }
    doc["id_map"] = {k: seen[k] for k in sorted(seen)}
    return doc


def _dump(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def serialize_report(
    report: ValidationReport,
    graph: PropertyGraph,
    repair: RepairOutcome | None = None,
) -> str:
    """Render ``report`` (and optionally a repair log) as byte-stable JSON.

    Bindings are written with the graph's external ids; ``id_map`` maps
    each id that appears to its internal ``kind:index``.
    """
    return _dump(report_to_dict(report, graph, repair))


def serialize_matches(
    graph: PropertyGraph, rule: str, side: str, bindings: Iterable[Mapping[str, ObjectId]]
) -> str:
    seen: dict[str, str] = {}
    rows = [_ids(graph, b, seen) for b in bindings]
    return _dump({"rule": rule, "side": side, "count": len(rows), "bindings": rows})
