from __future__ import annotations

import pytest

from ggd.constraints import DistanceRegistry, Identity, VarConst
from ggd.errors import KindMismatch, PatternError, ScopeError, UnknownDistance, UnknownRule
from ggd.pattern import GraphPattern, PatternEdge
from ggd.rules import GGD, rule_by_name

SOURCE = GraphPattern(("a", "b"), (PatternEdge("e", "a", "b"),), {"a": "person", "e": "knows"})


class TestGGD:
    def test_shared_and_fresh(self):
        target = GraphPattern(("a", "c"), (PatternEdge("f", "a", "c"),))
        r = GGD("r", SOURCE, target=target)
        assert r.shared_variables == ("a",)
        assert r.fresh_variables == ("c", "f")

    def test_source_must_not_be_empty(self):
        with pytest.raises(PatternError):
            GGD("r", GraphPattern())

    def test_shared_kind_must_agree(self):
        with pytest.raises(KindMismatch):
            GGD("r", SOURCE, target=GraphPattern(("e",)))

    def test_source_constraints_scope(self):
        with pytest.raises(ScopeError):
            GGD("r", SOURCE, (Identity("a", "z"),))

    def test_target_constraints_scope(self):
        target = GraphPattern(("c",))
        GGD("r", SOURCE, target=target, target_constraints=(Identity("a", "c"),))
        with pytest.raises(ScopeError):
            GGD("r", SOURCE, target=target, target_constraints=(Identity("a", "z"),))

    def test_check_distances(self):
        r = GGD("r", SOURCE, (VarConst("a", "k", "soundex", "<=", "x", 0),))
        with pytest.raises(UnknownDistance):
            r.check_distances(DistanceRegistry())

    def test_rule_by_name(self):
        r = GGD("r", SOURCE)
        assert rule_by_name([r], "r") is r
        with pytest.raises(UnknownRule):
            rule_by_name([r], "s")
