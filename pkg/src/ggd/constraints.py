"""Differential constraints and the distance-function registry.

Three constraint forms are supported:

* ``VarConst`` -- ``distance(x.key, constant) op threshold``
* ``VarVar``   -- ``distance(x.key1, y.key2) op threshold``
* ``Identity`` -- ``x = y`` or ``x != y`` on the bound objects

The operator compares the computed distance with the threshold.  A
distance constraint over a property that is not defined on the bound
object is unsatisfied whatever the operator, ``!=`` included.
"""

from __future__ import annotations

import operator
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Protocol, Union

from rapidfuzz.distance import Levenshtein

from ggd.errors import DuplicateName, UnknownDistance, VariantMismatch
from ggd.graph import ObjectId, Value, value_variant

TEXT, INTEGER, REAL, BOOLEAN = "text", "integer", "real", "boolean"
ALL_VARIANTS = frozenset({TEXT, INTEGER, REAL, BOOLEAN})
NUMERIC = frozenset({INTEGER, REAL})

OPERATORS: dict[str, Callable[[float, float], bool]] = {
    "=": operator.eq,
    "<": operator.lt,
    ">": operator.gt,
    "<=": operator.le,
    ">=": operator.ge,
    "!=": operator.ne,
}
OPERATOR_ALIASES = {"==": "=", "≤": "<=", "≥": ">=", "≠": "!=", "<>": "!="}

BUILTIN_NAMES = frozenset({"levenshtein", "levenshtein_ci", "absdiff", "exact"})


@dataclass(frozen=True)
class DistanceFn:
    """A named distance over property values.

    ``func`` must return a finite non-negative number and ``func(a, a)``
    must be 0 for every ``a`` of an applicable variant.  Functions must be
    re-entrant; the registry may be read from several threads.
    """

    name: str
    func: Callable[[Value, Value], float]
    variants: frozenset[str] = ALL_VARIANTS
    symmetric: bool = True

    def __call__(self, a: Value, b: Value) -> float:
        for value in (a, b):
            variant = value_variant(value)
            if variant not in self.variants:
                raise VariantMismatch(
                    f"distance {self.name!r} does not apply to {variant} value {value!r}"
                )
        return self.func(a, b)


def levenshtein(a: str, b: str) -> int:
    return Levenshtein.distance(a, b)


def levenshtein_ci(a: str, b: str) -> int:
    return Levenshtein.distance(a.casefold(), b.casefold())


def absdiff(a: int | float, b: int | float) -> int | float:
    if isinstance(a, int) and isinstance(b, int):
        return abs(a - b)
    return abs(float(a) - float(b))


def exact(a: Value, b: Value) -> int:
    # variant is part of identity: integer 1, real 1.0 and boolean true all differ
    return 0 if value_variant(a) == value_variant(b) and a == b else 1


class DistanceRegistry:
    """Name -> :class:`DistanceFn` lookup used when loading and evaluating rules."""

    def __init__(self, builtins: bool = True) -> None:
        self._functions: dict[str, DistanceFn] = {}
        self.frozen = False
        if builtins:
            self.register(DistanceFn("levenshtein", levenshtein, frozenset({TEXT})))
            self.register(DistanceFn("levenshtein_ci", levenshtein_ci, frozenset({TEXT})))
            self.register(DistanceFn("absdiff", absdiff, NUMERIC))
            self.register(DistanceFn("exact", exact, ALL_VARIANTS))

    def register(self, fn: DistanceFn) -> DistanceFn:
        if self.frozen:
            raise RuntimeError("registry is frozen")
        if fn.name in self._functions:
            raise DuplicateName(f"distance function {fn.name!r} is already registered")
        self._functions[fn.name] = fn
        return fn

    def get(self, name: str) -> DistanceFn:
        try:
            return self._functions[name]
        except KeyError:
            raise UnknownDistance(f"unknown distance function {name!r}") from None

    def freeze(self) -> DistanceRegistry:
        self.frozen = True
        return self

    def __contains__(self, name: object) -> bool:
        return name in self._functions

    def names(self) -> list[str]:
        return sorted(self._functions)


_default_registry = DistanceRegistry().freeze()


def default_registry() -> DistanceRegistry:
    """The shared registry holding only the built-ins.  It is frozen; build
    your own :class:`DistanceRegistry` to add functions."""
    return _default_registry


@dataclass(frozen=True)
class VarConst:
    var: str
    key: str
    distance: str
    op: str
    constant: Value
    threshold: float

    def __post_init__(self) -> None:
        _check_shape(self)

    def variables(self) -> tuple[str, ...]:
        return (self.var,)


@dataclass(frozen=True)
class VarVar:
    var1: str
    key1: str
    var2: str
    key2: str
    distance: str
    op: str
    threshold: float

    def __post_init__(self) -> None:
        _check_shape(self)

    def variables(self) -> tuple[str, ...]:
        return (self.var1, self.var2)


@dataclass(frozen=True)
class Identity:
    var1: str
    var2: str
    negated: bool = False

    def variables(self) -> tuple[str, ...]:
        return (self.var1, self.var2)


Constraint = Union[VarConst, VarVar, Identity]


def _check_shape(c) -> None:
    if c.op not in OPERATORS:
        raise ValueError(f"unknown operator {c.op!r}")
    if isinstance(c.threshold, bool) or not isinstance(c.threshold, (int, float)) or not c.threshold >= 0:
        raise ValueError(f"threshold must be a non-negative number, got {c.threshold!r}")


class PropertySource(Protocol):
    def get_property(self, oid: ObjectId, key: str) -> Value | None: ...


@dataclass
class Outcome:
    """Result of checking one constraint; ``missing`` lists ``var.key``
    references that were undefined on the bound object."""

    satisfied: bool
    missing: list[str] = field(default_factory=list)


def check_constraint(
    c: Constraint,
    binding: Mapping[str, ObjectId],
    graph: PropertySource,
    registry: DistanceRegistry | None = None,
) -> Outcome:
    if isinstance(c, Identity):
        same = binding[c.var1] == binding[c.var2]
        return Outcome(same != c.negated)
    registry = registry or _default_registry
    fn = registry.get(c.distance)
    compare = OPERATORS[c.op]
    if isinstance(c, VarConst):
        value = graph.get_property(binding[c.var], c.key)
        if value is None:
            # variant applicability is a rule error, so check the constant anyway
            value_fn_check(fn, c.constant)
            return Outcome(False, [f"{c.var}.{c.key}"])
        return Outcome(compare(fn(value, c.constant), c.threshold))
    left = graph.get_property(binding[c.var1], c.key1)
    right = graph.get_property(binding[c.var2], c.key2)
    missing = [f"{var}.{key}" for var, key, v in ((c.var1, c.key1, left), (c.var2, c.key2, right)) if v is None]
    if missing:
        return Outcome(False, missing)
    return Outcome(compare(fn(left, right), c.threshold))


def value_fn_check(fn: DistanceFn, value: Value) -> None:
    variant = value_variant(value)
    if variant not in fn.variants:
        raise VariantMismatch(f"distance {fn.name!r} does not apply to {variant} value {value!r}")


def eval_constraint(
    c: Constraint,
    binding: Mapping[str, ObjectId],
    graph: PropertySource,
    registry: DistanceRegistry | None = None,
) -> bool:
    """Whether ``binding`` satisfies ``c`` in ``graph``.

    Raises :class:`UnknownDistance` or :class:`VariantMismatch` when the
    constraint cannot be evaluated; a missing property is simply ``False``.
    """
    return check_constraint(c, binding, graph, registry).satisfied


def check_constraint_set(
    constraints: Iterable[Constraint],
    binding: Mapping[str, ObjectId],
    graph: PropertySource,
    registry: DistanceRegistry | None = None,
) -> tuple[bool, list[Constraint], list[str]]:
    """Evaluate every constraint (no short-circuit, so rule errors surface
    regardless of order).  Returns ``(satisfied, failed, missing)``."""
    failed: list[Constraint] = []
    missing: list[str] = []
    for c in constraints:
        outcome = check_constraint(c, binding, graph, registry)
        if not outcome.satisfied:
            failed.append(c)
            missing.extend(outcome.missing)
    return not failed, failed, missing


def eval_constraint_set(
    constraints: Sequence[Constraint],
    binding: Mapping[str, ObjectId],
    graph: PropertySource,
    registry: DistanceRegistry | None = None,
) -> bool:
    return check_constraint_set(constraints, binding, graph, registry)[0]
