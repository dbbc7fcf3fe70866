"""Rule language for GGDs.

A rule file holds one or more blocks::

    # people with the same name working for the same company are the same person
    GGD same_person {
      SOURCE { (a:person), (b:person), (c:company),
               (a)-[w1:worksAt]->(c), (b)-[w2:worksAt]->(c) }
      WHERE  { exact(a.name, b.name) <= 0, a != b }
      =>
      TARGET { (a)-[s:sameAs]->(b) }
    }

Vertex terms are ``(var:label)``, ``(var:-)`` for the wildcard, or a bare
``(var)`` which is a wildcard unless the same pattern labels it elsewhere.
Edge terms are ``(a)-[var:label]->(b)``.  Constraints are either
``distance(x.key, other) op threshold`` where ``other`` is ``y.key`` or a
literal, or an identity ``x = y`` / ``x != y``.  Both WHERE blocks are
optional; ``TARGET { }`` is the empty pattern.  ``#`` and ``//`` start
comments.
"""

from __future__ import annotations

import json
import re
from collections.abc import Iterable

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from ggd.constraints import (
    OPERATOR_ALIASES,
    Constraint,
    DistanceRegistry,
    Identity,
    VarConst,
    VarVar,
    default_registry,
)
from ggd.errors import DuplicateName, KindMismatch, RuleSyntaxError, ScopeError, UnknownDistance
from ggd.graph import Value
from ggd.pattern import WILDCARD, GraphPattern, PatternEdge
from ggd.rules import GGD

GRAMMAR = r"""
start: rule*

rule: "GGD" NAME "{" "SOURCE" pattern [where] "=>" "TARGET" pattern [where] "}"

pattern: "{" [term ("," term)*] "}"
?term: node
     | edge
node: "(" NAME [":" label] ")"
edge: node "-" "[" NAME [":" label] "]" "->" node
label: NAME
     | STRING
     | "-"                                          -> wildcard

where: "WHERE" "{" [constraint ("," constraint)*] "}"
constraint: NAME "(" attr "," operand ")" COMPARE NUMBER  -> distance
          | NAME COMPARE NAME                              -> identity
?operand: attr
        | literal
attr: NAME "." key
key: NAME | STRING
literal: STRING                                     -> string
       | SIGNED_NUMBER                              -> number
       | "true"                                     -> true
       | "false"                                    -> false

COMPARE: "<=" | ">=" | "!=" | "<>" | "==" | "=" | "<" | ">" | "≤" | "≥" | "≠"
NAME: /[A-Za-z_][A-Za-z0-9_]*/
STRING: /"(?:[^"\\\n]|\\.)*"/

%import common.NUMBER
%import common.SIGNED_NUMBER
%import common.WS
%ignore WS
%ignore /#[^\n]*/
%ignore /\/\/[^\n]*/
"""

_parser = Lark(GRAMMAR, parser="lalr", propagate_positions=True, maybe_placeholders=True)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_KEYWORDS = {"GGD", "SOURCE", "TARGET", "WHERE", "true", "false"}


def _pos(node) -> tuple[int | None, int | None]:
    if isinstance(node, Token):
        return node.line, node.column
    meta = getattr(node, "meta", None)
    if meta is not None and not meta.empty:
        return meta.line, meta.column
    return None, None


def _string(token: Token) -> str:
    try:
        return json.loads(token)
    except json.JSONDecodeError as exc:
        raise RuleSyntaxError(f"bad string literal {token}: {exc.msg}", *_pos(token)) from None


def _number(text: str) -> int | float:
    if any(ch in text for ch in ".eE"):
        return float(text)
    return int(text)


def _label(tree: Tree | None) -> str | None:
    if tree is None:
        return None
    if tree.data == "wildcard":
        return WILDCARD
    token = tree.children[0]
    return _string(token) if token.type == "STRING" else str(token)


class _PatternBuilder:
    def __init__(self) -> None:
        self.vertex_vars: list[str] = []
        self.edges: list[PatternEdge] = []
        self.labels: dict[str, str] = {}
        self.positions: dict[str, tuple] = {}

    def vertex(self, tree: Tree) -> str:
        name_tok, label_tree = tree.children
        name = str(name_tok)
        if any(e.var == name for e in self.edges):
            raise KindMismatch(f"variable {name!r} is already an edge variable", *_pos(name_tok))
        label = _label(label_tree)
        if name not in self.labels or self.labels[name] is None:
            if name not in self.labels:
                self.vertex_vars.append(name)
                self.positions[name] = _pos(name_tok)
            self.labels[name] = label
        elif label is not None and label != self.labels[name]:
            raise RuleSyntaxError(
                f"vertex {name!r} labelled both {self.labels[name]!r} and {label!r}", *_pos(name_tok)
            )
        return name

    def edge(self, tree: Tree) -> None:
        src_tree, name_tok, label_tree, dst_tree = tree.children
        src = self.vertex(src_tree)
        name = str(name_tok)
        if name in self.labels:
            raise RuleSyntaxError(f"variable {name!r} declared twice", *_pos(name_tok))
        dst = self.vertex(dst_tree)
        self.edges.append(PatternEdge(name, src, dst))
        self.labels[name] = _label(label_tree) or WILDCARD
        self.positions[name] = _pos(name_tok)

    def build(self) -> GraphPattern:
        labels = {v: (label or WILDCARD) for v, label in self.labels.items()}
        return GraphPattern(tuple(self.vertex_vars), tuple(self.edges), labels)


def _pattern(tree: Tree) -> tuple[GraphPattern, dict[str, tuple]]:
    builder = _PatternBuilder()
    for term in tree.children:
        if term is None:
            continue
        if term.data == "node":
            builder.vertex(term)
        else:
            builder.edge(term)
    return builder.build(), builder.positions


def _operator(token: Token) -> str:
    op = str(token)
    return OPERATOR_ALIASES.get(op, op)


def _literal(tree: Tree) -> Value:
    if tree.data == "string":
        return _string(tree.children[0])
    if tree.data == "number":
        return _number(str(tree.children[0]))
    return tree.data == "true"


def _attr(tree: Tree) -> tuple[str, str]:
    var_tok, key_tree = tree.children
    key_tok = key_tree.children[0]
    key = _string(key_tok) if key_tok.type == "STRING" else str(key_tok)
    return str(var_tok), key


def _constraint(tree: Tree, scope: set[str], registry: DistanceRegistry) -> Constraint:
    line, column = _pos(tree)
    if tree.data == "identity":
        left, op_tok, right = tree.children
        op = _operator(op_tok)
        if op not in ("=", "!="):
            raise RuleSyntaxError(f"identity constraints use = or !=, got {op_tok!s}", *_pos(op_tok))
        c: Constraint = Identity(str(left), str(right), negated=op == "!=")
    else:
        name_tok, first, second, op_tok, threshold_tok = tree.children
        if name_tok not in registry:
            raise UnknownDistance(f"unknown distance function {name_tok!s}", *_pos(name_tok))
        var1, key1 = _attr(first)
        op = _operator(op_tok)
        threshold = _number(str(threshold_tok))
        if second.data == "attr":
            var2, key2 = _attr(second)
            c = VarVar(var1, key1, var2, key2, str(name_tok), op, threshold)
        else:
            c = VarConst(var1, key1, str(name_tok), op, _literal(second), threshold)
    for var in c.variables():
        if var not in scope:
            raise ScopeError(f"constraint references undeclared variable {var!r}", line, column)
    return c


def _where(tree: Tree | None, scope: set[str], registry: DistanceRegistry) -> tuple[Constraint, ...]:
    if tree is None:
        return ()
    return tuple(_constraint(c, scope, registry) for c in tree.children if c is not None)


def _rule(tree: Tree, registry: DistanceRegistry) -> GGD:
    name_tok, src_tree, src_where, tgt_tree, tgt_where = tree.children
    source, _ = _pattern(src_tree)
    if source.is_empty():
        raise RuleSyntaxError(f"rule {name_tok!s}: source pattern must not be empty", *_pos(src_tree))
    target, target_pos = _pattern(tgt_tree)
    for var in target.variables:
        src_kind = source.kind_of(var)
        if src_kind is not None and src_kind != target.kind_of(var):
            raise KindMismatch(
                f"variable {var!r} is declared as {src_kind} in the source and as "
                f"{target.kind_of(var)} in the target",
                *target_pos[var],
            )
    source_scope = set(source.variables)
    phi_s = _where(src_where, source_scope, registry)
    phi_t = _where(tgt_where, source_scope | set(target.variables), registry)
    return GGD(str(name_tok), source, phi_s, target, phi_t)


def parse_ggd_file(text: str, registry: DistanceRegistry | None = None) -> list[GGD]:
    """Compile rule source into validated :class:`GGD` objects.

    Raises :class:`RuleSyntaxError`, :class:`ScopeError`,
    :class:`UnknownDistance`, :class:`KindMismatch` or
    :class:`DuplicateName`, each carrying ``line`` and ``column``.
    """
    registry = registry or default_registry()
    try:
        tree = _parser.parse(text)
    except UnexpectedInput as exc:
        raise RuleSyntaxError(_describe(exc), exc.line, exc.column) from None
    rules: list[GGD] = []
    seen: set[str] = set()
    for rule_tree in tree.children:
        name_tok = rule_tree.children[0]
        if str(name_tok) in seen:
            raise DuplicateName(f"rule name {name_tok!s} used twice", *_pos(name_tok))
        seen.add(str(name_tok))
        rules.append(_rule(rule_tree, registry))
    return rules


def _describe(exc: UnexpectedInput) -> str:
    if isinstance(exc, UnexpectedEOF):
        return "unexpected end of input"
    if isinstance(exc, UnexpectedToken):
        if exc.token.type == "$END":
            return "unexpected end of input"
        return f"unexpected {exc.token!s}"
    if isinstance(exc, UnexpectedCharacters):
        return f"unexpected character {exc.char!r}"
    return str(exc)


# printing -----------------------------------------------------------------


def format_key(key: str) -> str:
    return key if _IDENT.match(key) and key not in _KEYWORDS else json.dumps(key, ensure_ascii=False)


def format_label(label: str) -> str:
    if label == WILDCARD:
        return "-"
    return format_key(label)


def format_literal(value: Value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    return repr(value)


def format_constraint(c: Constraint) -> str:
    if isinstance(c, Identity):
        return f"{c.var1} {'!=' if c.negated else '='} {c.var2}"
    if isinstance(c, VarConst):
        args = f"{c.var}.{format_key(c.key)}, {format_literal(c.constant)}"
    else:
        args = f"{c.var1}.{format_key(c.key1)}, {c.var2}.{format_key(c.key2)}"
    return f"{c.distance}({args}) {c.op} {c.threshold!r}"


def format_pattern(pattern: GraphPattern) -> str:
    terms = [f"({v}:{format_label(pattern.labels[v])})" for v in pattern.vertex_vars]
    terms += [f"({e.src})-[{e.var}:{format_label(pattern.labels[e.var])}]->({e.dst})" for e in pattern.edge_vars]
    return "{ " + ", ".join(terms) + " }" if terms else "{ }"


def _format_where(constraints: Iterable[Constraint]) -> str:
    constraints = list(constraints)
    if not constraints:
        return ""
    return "  WHERE { " + ", ".join(format_constraint(c) for c in constraints) + " }\n"


def format_ggd(ggd: GGD) -> str:
    return (
        f"GGD {ggd.name} {{\n"
        f"  SOURCE {format_pattern(ggd.source)}\n"
        f"{_format_where(ggd.source_constraints)}"
        f"  =>\n"
        f"  TARGET {format_pattern(ggd.target)}\n"
        f"{_format_where(ggd.target_constraints)}"
        f"}}\n"
    )


def format_ggd_file(rules: Iterable[GGD]) -> str:
    return "\n".join(format_ggd(r) for r in rules)
