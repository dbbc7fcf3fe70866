from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ggd.constraints import (
    DistanceFn,
    DistanceRegistry,
    Identity,
    VarConst,
    VarVar,
    check_constraint_set,
    default_registry,
    eval_constraint,
    eval_constraint_set,
)
from ggd.errors import DuplicateName, UnknownDistance, VariantMismatch
from ggd.graph import PropertyGraph

import oracles

texts = st.text(alphabet="abcAB .", max_size=8)
ints = st.integers(min_value=-(10**6), max_value=10**6)
reals = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
values = st.one_of(texts, ints, reals, st.booleans())


@pytest.fixture
def school():
    g = PropertyGraph()
    s = g.add_vertex({"student"}, {"school": "central high", "grade": 11})
    h = g.add_vertex({"highSchool"}, {"name": "central high."})
    m = g.add_edge(s, h, {"mentions"}, {"nMentions": 10})
    return g, {"s": s, "h": h, "m": m}


class TestBuiltins:
    def test_levenshtein_example(self, school):
        g, b = school
        c = VarVar("s", "school", "h", "name", "levenshtein", "<=", 1)
        assert eval_constraint(c, b, g)

    def test_greater_than_encoding(self, school):
        g, b = school
        c = VarConst("m", "nMentions", "absdiff", ">", 10, 0)
        assert not eval_constraint(c, b, g)
        g2 = PropertyGraph()
        s, h = g2.add_vertex(), g2.add_vertex()
        m = g2.add_edge(s, h, properties={"nMentions": 11})
        assert eval_constraint(c, {"m": m}, g2)

    def test_case_insensitive_variant(self):
        reg = default_registry()
        assert reg.get("levenshtein")("Ann", "ann") == 1
        assert reg.get("levenshtein_ci")("Ann", "ann") == 0

    def test_absdiff_promotes_int_and_real(self):
        assert default_registry().get("absdiff")(1, 2.5) == 1.5

    def test_exact_keeps_variants_apart(self):
        exact = default_registry().get("exact")
        assert exact(1, 1) == 0
        assert exact(1, 1.0) == 1
        assert exact(1, True) == 1
        assert exact("1", 1) == 1

    @pytest.mark.parametrize("name, a, b", [("levenshtein", "x", 1), ("absdiff", "x", 1), ("absdiff", True, 1)])
    def test_variant_mismatch(self, name, a, b):
        with pytest.raises(VariantMismatch):
            default_registry().get(name)(a, b)

    @given(texts, texts)
    def test_levenshtein_matches_reference(self, a, b):
        reg = default_registry()
        assert reg.get("levenshtein")(a, b) == oracles.edit_distance(a, b)
        assert reg.get("levenshtein_ci")(a, b) == oracles.edit_distance(a.casefold(), b.casefold())

    @given(st.one_of(ints, reals), st.one_of(ints, reals))
    def test_absdiff_matches_reference(self, a, b):
        assert default_registry().get("absdiff")(a, b) == pytest.approx(oracles.distance("absdiff", a, b))

    @given(values, values)
    def test_exact_matches_reference(self, a, b):
        assert default_registry().get("exact")(a, b) == oracles.distance("exact", a, b)

    @given(values)
    def test_zero_on_identical_values(self, a):
        reg = default_registry()
        for name in reg.names():
            fn = reg.get(name)
            try:
                assert fn(a, a) == 0
            except VariantMismatch:
                pass


class TestRegistry:
    def test_register_and_resolve(self):
        reg = DistanceRegistry()
        reg.register(DistanceFn("prefix", lambda a, b: 0 if a[:1] == b[:1] else 1, frozenset({"text"})))
        assert "prefix" in reg and reg.get("prefix")("ab", "ac") == 0

    def test_duplicate_name(self):
        reg = DistanceRegistry(builtins=False)
        fn = DistanceFn("levenshtein", oracles.edit_distance)
        reg.register(fn)
        with pytest.raises(DuplicateName):
            reg.register(fn)

    def test_builtins_are_reserved(self):
        with pytest.raises(DuplicateName):
            DistanceRegistry().register(DistanceFn("exact", lambda a, b: 0))

    def test_unknown_distance(self, school):
        g, b = school
        with pytest.raises(UnknownDistance):
            eval_constraint(VarConst("s", "school", "soundex", "<=", "x", 0), b, g)

    def test_default_registry_is_frozen(self):
        with pytest.raises(RuntimeError):
            default_registry().register(DistanceFn("other", lambda a, b: 0))


class TestEvaluation:
    @pytest.mark.parametrize("op", ["=", "<", ">", "<=", ">=", "!="])
    def test_missing_property_is_false_for_every_operator(self, school, op):
        g, b = school
        assert not eval_constraint(VarConst("s", "nickname", "levenshtein", op, "x", 0), b, g)
        assert not eval_constraint(VarVar("s", "nickname", "h", "name", "levenshtein", op, 0), b, g)

    def test_missing_property_still_checks_the_constant(self, school):
        g, b = school
        with pytest.raises(VariantMismatch):
            eval_constraint(VarConst("s", "nickname", "levenshtein", "<=", 3, 0), b, g)

    def test_missing_properties_are_reported(self, school):
        g, b = school
        ok, failed, missing = check_constraint_set(
            [VarVar("s", "nickname", "h", "alias", "exact", "<=", 0)], b, g
        )
        assert not ok and len(failed) == 1
        assert missing == ["s.nickname", "h.alias"]

    def test_identity(self, school):
        g, b = school
        assert eval_constraint(Identity("s", "s"), b, g)
        assert not eval_constraint(Identity("s", "h"), b, g)
        assert eval_constraint(Identity("s", "h", negated=True), b, g)

    def test_identity_across_kinds(self, school):
        g, b = school
        assert not eval_constraint(Identity("s", "m"), b, g)
        assert eval_constraint(Identity("s", "m", negated=True), b, g)

    def test_conjunction(self, school):
        g, b = school
        yes = Identity("s", "s")
        no = Identity("s", "h")
        assert eval_constraint_set([], b, g)
        assert eval_constraint_set([yes], b, g)
        assert not eval_constraint_set([yes, no], b, g)
        assert not eval_constraint_set([no, yes], b, g)

    def test_errors_surface_regardless_of_order(self, school):
        g, b = school
        bad = VarConst("s", "grade", "levenshtein", "<=", "x", 0)
        with pytest.raises(VariantMismatch):
            eval_constraint_set([Identity("s", "h"), bad], b, g)

    def test_equality_encoding(self):
        g = PropertyGraph()
        for a, bval in [("x", "x"), ("x", "y"), (1, 1), (1, 1.0), (2.5, 2.5)]:
            u, v = g.add_vertex(properties={"k": a}), g.add_vertex(properties={"k": bval})
            c = VarVar("u", "k", "v", "k", "exact", "<=", 0)
            assert eval_constraint(c, {"u": u, "v": v}, g) == (type(a) is type(bval) and a == bval)

    @given(st.integers(0, 5), st.integers(0, 5))
    def test_operator_coherence(self, d, t):
        g = PropertyGraph()
        v = g.add_vertex(properties={"k": d})
        le = eval_constraint(VarConst("v", "k", "absdiff", "<=", 0, t), {"v": v}, g)
        gt = eval_constraint(VarConst("v", "k", "absdiff", ">", 0, t), {"v": v}, g)
        eq = eval_constraint(VarConst("v", "k", "absdiff", "=", 0, t), {"v": v}, g)
        assert le != gt
        assert eq == (d == t)


class TestShape:
    def test_negative_threshold(self):
        with pytest.raises(ValueError):
            VarConst("x", "k", "exact", "<=", 1, -1)

    def test_unknown_operator(self):
        with pytest.raises(ValueError):
            VarConst("x", "k", "exact", "~", 1, 0)

    def test_variables(self):
        assert VarVar("a", "k", "b", "k", "exact", "<=", 0).variables() == ("a", "b")
        assert Identity("a", "b").variables() == ("a", "b")
