"""Fixture loading shared by the test modules."""

from __future__ import annotations

from pathlib import Path

from ggd.dsl import parse_ggd_file
from ggd.graphio import parse_graph_file

FIXTURES = Path(__file__).parent / "fixtures"


def load_graph(name: str):
    return parse_graph_file((FIXTURES / f"{name}.graph.json").read_text(encoding="utf-8"))


def load_rules(*names: str):
    text = "\n".join((FIXTURES / f"{n}.ggd").read_text(encoding="utf-8") for n in names)
    return parse_ggd_file(text)
