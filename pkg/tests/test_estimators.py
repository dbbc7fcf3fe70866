from __future__ import annotations

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from ggd.estimators import GGDRepairer, GGDValidator, check_rules
from ggd.errors import UnknownDistance

from helpers import FIXTURES, load_graph, load_rules


class TestCheckRules:
    def test_accepts_text_path_and_objects(self):
        path = FIXTURES / "teacher_school.ggd"
        from_path = check_rules(path)
        assert check_rules(str(path)) == from_path
        assert check_rules(path.read_text()) == from_path
        assert check_rules(from_path[0]) == from_path

    def test_rejects_duplicates_and_bad_input(self):
        (r,) = load_rules("teacher_school")
        with pytest.raises(ValueError):
            check_rules([r, r])
        with pytest.raises(TypeError):
            check_rules([object()])
        with pytest.raises(ValueError):
            check_rules(None)

    def test_unknown_distance(self):
        with pytest.raises(UnknownDistance):
            check_rules('GGD r { SOURCE { (x) } WHERE { soundex(x.a, "b") <= 0 } => TARGET { } }')


class TestValidator:
    def test_params_and_clone(self):
        v = GGDValidator(rules="x", parallelism=3)
        assert v.get_params() == {"rules": "x", "registry": None, "parallelism": 3}
        assert clone(v).get_params() == v.get_params()

    def test_predict(self):
        v = GGDValidator(rules=FIXTURES / "article_theme.ggd").fit()
        graphs = [load_graph("article_theme_valid"), load_graph("article_theme_violated")]
        np.testing.assert_array_equal(v.predict(graphs), [True, False])
        assert v.score(graphs) == 0.5
        assert v.n_rules_ == 1

    def test_accepts_json_text(self):
        v = GGDValidator(rules=FIXTURES / "article_theme.ggd").fit()
        text = (FIXTURES / "article_theme_valid.graph.json").read_text()
        assert v.predict(text).tolist() == [True]

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            GGDValidator(rules="x").predict([load_graph("teacher_school_valid")])

    def test_report(self):
        v = GGDValidator(rules=FIXTURES / "teacher_school.ggd").fit()
        assert v.report(load_graph("teacher_school_violated"))["teacher_school"].verdict == "violated"


class TestRepairer:
    def test_transform_copies_by_default(self):
        g = load_graph("er")
        rep = GGDRepairer(rules=load_rules("er", "purchase"))
        (out,) = rep.fit_transform([g])
        assert len(out.edges) > len(g.edges)
        assert rep.outcomes_[0].converged
        assert GGDValidator(rules=load_rules("er", "purchase")).fit().predict([out]).tolist() == [True]

    def test_in_place(self):
        g = load_graph("er_pair")
        (out,) = GGDRepairer(rules=load_rules("er"), copy=False).fit_transform([g])
        assert out is g and len(g.edges) == 3

    def test_bad_rounds(self):
        with pytest.raises(ValueError):
            GGDRepairer(rules=load_rules("er"), max_rounds=0).fit()
