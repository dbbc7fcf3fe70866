"""Command line front end.

    ggd validate --graph G.graph.json --rules R.ggd --out report.json [--parallelism N]
    ggd repair   --graph G.graph.json --rules R.ggd --out-graph G2.graph.json --out report.json [--max-rounds K]
    ggd match    --graph G.graph.json --rules R.ggd --rule NAME --side source|target [--out F]

Exit status: 0 success / graph satisfies the rules, 1 violations remain,
2 bad input (parse errors, unknown rule, rule evaluation errors).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from ggd.dsl import parse_ggd_file
from ggd.errors import GGDError
from ggd.graphio import parse_graph_file, serialize_graph
from ggd.pattern import find_matches
from ggd.repair import repair_to_fixpoint
from ggd.reporting import serialize_matches, serialize_report
from ggd.rules import rule_by_name
from ggd.validation import validate_set

EXIT_OK, EXIT_VIOLATED, EXIT_ERROR = 0, 1, 2

log = logging.getLogger("ggd")


@dataclass
class InvocationConfig:
    command: str
    graph_path: Path
    rules_path: Path
    output_path: Path | None = None
    graph_output_path: Path | None = None
    max_rounds: int = 10
    parallelism: int = 1
    fail_on_violation: bool = True
    rule: str | None = None
    side: str = "source"

    def check(self) -> None:
        for path in (self.graph_path, self.rules_path):
            if not path.is_file():
                raise GGDError(f"cannot read {path}")
        for path in (self.output_path, self.graph_output_path):
            if path is not None:
                parent = path.parent if str(path.parent) else Path(".")
                if not parent.is_dir() or not os.access(parent, os.W_OK):
                    raise GGDError(f"cannot write {path}")
        if self.max_rounds < 1 or self.parallelism < 1:
            raise GGDError("--max-rounds and --parallelism must be positive")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ggd", description="Validate and repair graph generating dependencies.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--graph", required=True, type=Path, help=".graph.json input")
        p.add_argument("--rules", required=True, type=Path, help=".ggd rule file")
        p.add_argument("--parallelism", type=_positive, default=os.cpu_count() or 1)

    p = sub.add_parser("validate", help="check the graph against the rules")
    common(p)
    p.add_argument("--out", required=True, type=Path, help="report path")
    p.add_argument("--no-fail-on-violation", dest="fail_on_violation", action="store_false",
                   help="exit 0 even if rules are violated")

    p = sub.add_parser("repair", help="generate vertices/edges until the rules hold")
    common(p)
    p.add_argument("--out-graph", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path, help="report path")
    p.add_argument("--max-rounds", type=_positive, default=10)

    p = sub.add_parser("match", help="list the matches of one rule pattern")
    common(p)
    p.add_argument("--rule", required=True)
    p.add_argument("--side", choices=("source", "target"), default="source")
    p.add_argument("--out", type=Path, help="write JSON here instead of stdout")
    return parser


def _config(args: argparse.Namespace) -> InvocationConfig:
    return InvocationConfig(
        command=args.command,
        graph_path=args.graph,
        rules_path=args.rules,
        output_path=getattr(args, "out", None),
        graph_output_path=getattr(args, "out_graph", None),
        max_rounds=getattr(args, "max_rounds", 10),
        parallelism=args.parallelism,
        fail_on_violation=getattr(args, "fail_on_violation", True),
        rule=getattr(args, "rule", None),
        side=getattr(args, "side", "source"),
    )


def _load(config: InvocationConfig):
    graph = parse_graph_file(config.graph_path.read_text(encoding="utf-8"))
    rules = parse_ggd_file(config.rules_path.read_text(encoding="utf-8"))
    return graph, rules


def cmd_validate(config: InvocationConfig) -> int:
    graph, rules = _load(config)
    report = validate_set(graph, rules, parallelism=config.parallelism)
    config.output_path.write_text(serialize_report(report, graph), encoding="utf-8")
    if report.has_errors:
        for result in report.results:
            if result.error is not None:
                print(f"error: rule {result.name}: {result.error}", file=sys.stderr)
        return EXIT_ERROR
    if report.holds or not config.fail_on_violation:
        return EXIT_OK
    print(f"{len(report.violations)} violation(s)", file=sys.stderr)
    return EXIT_VIOLATED


def cmd_repair(config: InvocationConfig) -> int:
    graph, rules = _load(config)
    outcome = repair_to_fixpoint(graph, rules, config.max_rounds, parallelism=config.parallelism)
    config.graph_output_path.write_text(serialize_graph(graph), encoding="utf-8")
    config.output_path.write_text(serialize_report(outcome.report, graph, outcome), encoding="utf-8")
    if outcome.converged and not outcome.unrepairable:
        return EXIT_OK
    if not outcome.converged:
        print(f"repair did not converge within {config.max_rounds} rounds", file=sys.stderr)
    if outcome.unrepairable:
        print(f"{len(outcome.unrepairable)} unrepairable violation(s)", file=sys.stderr)
    return EXIT_VIOLATED


def cmd_match(config: InvocationConfig) -> int:
    graph, rules = _load(config)
    rule = rule_by_name(rules, config.rule)
    pattern = rule.source if config.side == "source" else rule.target
    text = serialize_matches(graph, rule.name, config.side, find_matches(pattern, graph))
    if config.output_path is not None:
        config.output_path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "repair": cmd_repair, "match": cmd_match}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    config = _config(args)
    try:
        config.check()
        return COMMANDS[config.command](config)
    except GGDError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
