"""scikit-learn style wrappers.

``fit`` compiles the rule set once; ``predict`` / ``transform`` then work
on any number of graphs.  Rules may be given as rule-file text, a path to
a ``.ggd`` file, or already-built :class:`GGD` objects.  Graphs may be
:class:`PropertyGraph` instances or ``.graph.json`` text.

    >>> validator = GGDValidator(rules=RULES).fit()
    >>> validator.predict([graph])          # array([ True])
    >>> repaired = GGDRepairer(rules=RULES, max_rounds=5).fit_transform([graph])
"""

from __future__ import annotations

import os

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ggd.constraints import DistanceRegistry, default_registry
from ggd.dsl import parse_ggd_file
from ggd.graph import PropertyGraph
from ggd.graphio import parse_graph_file
from ggd.repair import RepairOutcome, repair_to_fixpoint
from ggd.rules import GGD
from ggd.validation import ValidationReport, validate_set


def check_rules(rules, registry: DistanceRegistry | None = None) -> list[GGD]:
    """Normalise ``rules`` to a list of GGDs whose distances all resolve."""
    registry = registry or default_registry()
    if rules is None:
        raise ValueError("no rules given")
    if isinstance(rules, os.PathLike) or (isinstance(rules, str) and rules.endswith(".ggd") and os.path.isfile(rules)):
        with open(rules, encoding="utf-8") as fh:
            rules = fh.read()
    if isinstance(rules, str):
        return parse_ggd_file(rules, registry)
    if isinstance(rules, GGD):
        rules = [rules]
    out = list(rules)
    for r in out:
        if not isinstance(r, GGD):
            raise TypeError(f"expected GGD objects, got {type(r).__name__}")
        r.check_distances(registry)
    names = [r.name for r in out]
    if len(set(names)) != len(names):
        raise ValueError("rule names must be unique")
    return out


def check_graph(graph) -> PropertyGraph:
    if isinstance(graph, PropertyGraph):
        return graph
    if isinstance(graph, (str, bytes)):
        return parse_graph_file(graph if isinstance(graph, str) else graph.decode("utf-8"))
    raise TypeError(f"expected a PropertyGraph or graph JSON text, got {type(graph).__name__}")


def check_graphs(X) -> list[PropertyGraph]:
    if isinstance(X, (PropertyGraph, str, bytes)):
        X = [X]
    return [check_graph(g) for g in X]


class GGDValidator(BaseEstimator):
    """Predict, per graph, whether every rule holds.

    Parameters
    ----------
    rules : str, path, GGD or sequence of GGD
        Rule text, a ``.ggd`` path, or compiled rules.
    registry : DistanceRegistry, optional
        Distance functions referenced by the rules; built-ins by default.
    parallelism : int
        Worker threads for rule evaluation; never changes the result.
    """

    def __init__(self, rules=None, registry: DistanceRegistry | None = None, parallelism: int = 1):
        self.rules = rules
        self.registry = registry
        self.parallelism = parallelism

    def fit(self, X=None, y=None):
        self.rules_ = check_rules(self.rules, self.registry)
        self.n_rules_ = len(self.rules_)
        return self

    def report(self, graph) -> ValidationReport:
        check_is_fitted(self, "rules_")
        return validate_set(check_graph(graph), self.rules_, self.registry, self.parallelism)

    def predict(self, X) -> np.ndarray:
        """Boolean array, True where the graph satisfies all rules."""
        return np.array([self.report(g).holds for g in check_graphs(X)], dtype=bool)

    def score(self, X, y=None) -> float:
        """Fraction of graphs that satisfy all rules."""
        pred = self.predict(X)
        return float(pred.mean()) if len(pred) else 1.0


class GGDRepairer(TransformerMixin, BaseEstimator):
    """Transform graphs into repaired copies by generating vertices and edges.

    With ``copy=False`` the input graphs are repaired in place.  The
    :class:`RepairOutcome` of each graph is kept in ``outcomes_``.
    """

    def __init__(
        self,
        rules=None,
        max_rounds: int = 10,
        registry: DistanceRegistry | None = None,
        parallelism: int = 1,
        copy: bool = True,
    ):
        self.rules = rules
        self.max_rounds = max_rounds
        self.registry = registry
        self.parallelism = parallelism
        self.copy = copy

    def fit(self, X=None, y=None):
        if int(self.max_rounds) < 1:
            raise ValueError("max_rounds must be a positive integer")
        self.rules_ = check_rules(self.rules, self.registry)
        return self

    def transform(self, X) -> list[PropertyGraph]:
        check_is_fitted(self, "rules_")
        graphs = check_graphs(X)
        out: list[PropertyGraph] = []
        self.outcomes_: list[RepairOutcome] = []
        for graph in graphs:
            if self.copy:
                graph = graph.copy()
            self.outcomes_.append(
                repair_to_fixpoint(graph, self.rules_, self.max_rounds, self.registry, self.parallelism)
            )
            out.append(graph)
        return out


