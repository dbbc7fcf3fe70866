from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

from ggd.constraints import Constraint, DistanceRegistry, Identity
from ggd.errors import KindMismatch, PatternError, ScopeError, UnknownRule
from ggd.pattern import GraphPattern


@dataclass(frozen=True)
class GGD:
    """A graph generating dependency ``source, source_constraints -> target, target_constraints``.

    Every source match that satisfies ``source_constraints`` must extend to
    a target match (agreeing on the shared variables) that satisfies
    ``target_constraints``.  The target pattern may be empty.
    """

    name: str
    source: GraphPattern
    source_constraints: tuple[Constraint, ...] = ()
    target: GraphPattern = field(default_factory=GraphPattern)
    target_constraints: tuple[Constraint, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "source_constraints", tuple(self.source_constraints))
        object.__setattr__(self, "target_constraints", tuple(self.target_constraints))
        if self.source.is_empty():
            raise PatternError(f"rule {self.name!r}: source pattern must not be empty")
        for var in self.target.variables:
            src_kind = self.source.kind_of(var)
            if src_kind is not None and src_kind != self.target.kind_of(var):
                raise KindMismatch(
                    f"rule {self.name!r}: variable {var!r} is declared as {src_kind} in the "
                    f"source and as {self.target.kind_of(var)} in the target"
                )
        source_scope = set(self.source.variables)
        for c in self.source_constraints:
            _check_scope(self.name, c, source_scope, "source")
        target_scope = source_scope | set(self.target.variables)
        for c in self.target_constraints:
            _check_scope(self.name, c, target_scope, "target")

    @property
    def shared_variables(self) -> tuple[str, ...]:
        return tuple(v for v in self.target.variables if self.source.kind_of(v) is not None)

    @property
    def fresh_variables(self) -> tuple[str, ...]:
        return tuple(v for v in self.target.variables if self.source.kind_of(v) is None)

    def kind_of(self, var: str) -> str | None:
        return self.source.kind_of(var) or self.target.kind_of(var)

    def distance_names(self) -> set[str]:
        return {
            c.distance
            for c in self.source_constraints + self.target_constraints
            if not isinstance(c, Identity)
        }

    def check_distances(self, registry: DistanceRegistry) -> None:
        for name in sorted(self.distance_names()):
            registry.get(name)


def _check_scope(rule: str, c: Constraint, scope: set[str], side: str) -> None:
    for var in c.variables():
        if var not in scope:
            raise ScopeError(f"rule {rule!r}: {side} constraint references undeclared variable {var!r}")


def rule_by_name(rules: Sequence[GGD], name: str) -> GGD:
    for rule in rules:
        if rule.name == name:
            return rule
    raise UnknownRule(f"no rule named {name!r}")
