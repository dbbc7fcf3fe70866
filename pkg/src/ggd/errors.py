"""Exception hierarchy shared by every module of the engine."""

from __future__ import annotations


class GGDError(Exception):
    """Base class. Carries an optional source position for rule-file errors."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


# graph model
class GraphError(GGDError):
    pass


class UnknownObject(GraphError):
    pass


class UnknownEndpoint(GraphError):
    pass


class InvalidValue(GraphError):
    pass


class DuplicateId(GraphError):
    pass


class GraphFormatError(GraphError):
    """Malformed graph document (bad JSON or wrong shape)."""


class DanglingEdge(GraphFormatError):
    pass


# patterns
class PatternError(GGDError):
    pass


class SeedKindMismatch(PatternError):
    pass


# rule definitions (load time)
class RuleSyntaxError(GGDError):
    pass


class ScopeError(GGDError):
    pass


class KindMismatch(GGDError):
    pass


class DuplicateName(GGDError):
    pass


# rule evaluation
class RuleError(GGDError):
    """A rule cannot be evaluated; distinct from the rule simply being false."""


class UnknownDistance(RuleError):
    pass


class VariantMismatch(RuleError):
    pass


# repair / orchestration
class StaleViolation(GGDError):
    pass


class UnrepairablePlan(GGDError):
    pass


class UnknownRule(GGDError):
    pass
