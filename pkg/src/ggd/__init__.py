"""Graph generating dependencies over property graphs: matching, validation and add-only repair."""

from ggd.constraints import (
    DistanceFn,
    DistanceRegistry,
    Identity,
    VarConst,
    VarVar,
    default_registry,
    eval_constraint,
    eval_constraint_set,
)
from ggd.dsl import format_ggd, parse_ggd_file
from ggd.estimators import GGDRepairer, GGDValidator
from ggd.graph import EDGE, VERTEX, ObjectId, PropertyGraph
from ggd.graphio import parse_graph_file, serialize_graph
from ggd.pattern import WILDCARD, GraphPattern, PatternEdge, find_matches, find_matches_seeded, label_matches
from ggd.repair import RepairOutcome, RepairPlan, apply_plans, plan_repair, repair_to_fixpoint
from ggd.reporting import serialize_report
from ggd.rules import GGD
from ggd.validation import ValidationReport, Violation, validate_ggd, validate_set

__all__ = [
    "DistanceFn",
    "DistanceRegistry",
    "EDGE",
    "GGD",
    "GGDRepairer",
    "GGDValidator",
    "GraphPattern",
    "Identity",
    "ObjectId",
    "PatternEdge",
    "PropertyGraph",
    "RepairOutcome",
    "RepairPlan",
    "VERTEX",
    "ValidationReport",
    "VarConst",
    "VarVar",
    "Violation",
    "WILDCARD",
    "apply_plans",
    "default_registry",
    "eval_constraint",
    "eval_constraint_set",
    "find_matches",
    "find_matches_seeded",
    "format_ggd",
    "label_matches",
    "parse_ggd_file",
    "parse_graph_file",
    "plan_repair",
    "repair_to_fixpoint",
    "serialize_graph",
    "serialize_report",
    "validate_ggd",
    "validate_set",
]
