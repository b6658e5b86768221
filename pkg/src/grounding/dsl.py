"""Constraint language for referring expressions.

Grammar (s-expressions)::

    QUERY      := "(select" CONSTRAINT+ ")"
    CONSTRAINT := "(category" NAME ")"
                | "(rel" REL QUERY ["ordinal" INT] ")"
                | "(band" ("high" | "low") ")"
                | "(stack" ("top" | "middle" | "bottom" | INT) ")"
                | "(fact" KEY VALUE ")"
    REL        := "left-of" | "right-of" | "above" | "below" | "next-to"

Reading happens in two passes: pyparsing turns text into positioned atoms and
lists, then ``_build_query`` checks keywords and builds the typed tree.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

import pyparsing as pp

from ..errors import QuerySyntaxError
from ..graph import Relation

MAX_DEPTH = 4

REL_KEYWORDS = {
    "left-of": Relation.LEFT,
    "right-of": Relation.RIGHT,
    "above": Relation.ABOVE,
    "below": Relation.BELOW,
    "next-to": Relation.NEXT_TO,
}
_REL_NAMES = {v: k for k, v in REL_KEYWORDS.items()}


class BandLevel(Enum):
    HIGH = "high"
    LOW = "low"


class StackSlot(Enum):
    TOP = "top"
    MIDDLE = "middle"
    BOTTOM = "bottom"


@dataclass(frozen=True)
class Category:
    name: str


@dataclass(frozen=True)
class Band:
    level: BandLevel


@dataclass(frozen=True)
class StackPos:
    """Position inside a vertical stack; an int is the n-th from the top."""

    slot: StackSlot | int


@dataclass(frozen=True)
class Fact:
    key: str
    value: str


@dataclass(frozen=True)
class Rel:
    relation: Relation
    anchor: Query
    ordinal: int = 1


Constraint = Union[Category, Band, StackPos, Fact, Rel]


@dataclass(frozen=True)
class Query:
    """Conjunction of constraints (the parsed form of one referring expression)."""

    constraints: tuple[Constraint, ...]

    @property
    def depth(self) -> int:
        nested = [c.anchor.depth for c in self.constraints if isinstance(c, Rel)]
        return 1 + max(nested, default=0)

    def with_constraint(self, constraint: Constraint) -> Query:
        return Query(self.constraints + (constraint,))


ConstraintExpr = Query


# -- reader ---------------------------------------------------------------


@dataclass(frozen=True)
class _Atom:
    value: str | int
    pos: int
    quoted: bool = False


@dataclass(frozen=True)
class _List:
    items: list
    pos: int


def _reader() -> pp.ParserElement:
    sexp = pp.Forward()
    integer = pp.Regex(r"\d+(?![^\s()])").set_parse_action(
        lambda s, loc, t: _Atom(int(t[0]), loc)
    )
    qstring = pp.QuotedString('"', esc_char="\\").set_parse_action(
        lambda s, loc, t: _Atom(t[0], loc, quoted=True)
    )
    symbol = pp.Word(pp.printables, exclude_chars='()"').set_parse_action(
        lambda s, loc, t: _Atom(t[0], loc)
    )
    lpar, rpar = map(pp.Suppress, "()")
    slist = (lpar + pp.ZeroOrMore(sexp) + rpar).set_parse_action(
        lambda s, loc, t: _List(list(t), loc)
    )
    sexp <<= integer | qstring | symbol | slist
    return sexp


_READER = _reader()

# (select (rel R (select ... (category X)))) opens two lists per query level
_MAX_PARENS = 2 * MAX_DEPTH


def _check_nesting(text: str) -> None:
    """Reject lists nested past what MAX_DEPTH allows before the reader recurses."""
    level = 0
    quoted = escaped = False
    for pos, ch in enumerate(text):
        if quoted:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                quoted = False
        elif ch == '"':
            quoted = True
        elif ch == "(":
            level += 1
            if level > _MAX_PARENS:
                raise QuerySyntaxError(f"anchors nest deeper than {MAX_DEPTH}", pos)
        elif ch == ")":
            level -= 1


def _symbol(item, what: str) -> _Atom:
    if not isinstance(item, _Atom) or isinstance(item.value, int):
        raise QuerySyntaxError(f"expected {what}", getattr(item, "pos", None))
    return item


def _build_query(node, depth: int = 1) -> Query:
    if not isinstance(node, _List) or not node.items:
        raise QuerySyntaxError("expected (select ...)", getattr(node, "pos", None))
    head = node.items[0]
    if not isinstance(head, _Atom) or head.value != "select":
        raise QuerySyntaxError("query must start with select", head.pos)
    if depth > MAX_DEPTH:
        raise QuerySyntaxError(f"anchors nest deeper than {MAX_DEPTH}", node.pos)
    if len(node.items) == 1:
        raise QuerySyntaxError("select needs at least one constraint", node.pos)
    return Query(tuple(_build_constraint(item, depth) for item in node.items[1:]))


def _build_constraint(node, depth: int) -> Constraint:
    if not isinstance(node, _List) or not node.items:
        raise QuerySyntaxError("expected a constraint list", getattr(node, "pos", None))
    head = _symbol(node.items[0], "constraint keyword")
    args = node.items[1:]

    def arity(n: int) -> None:
        if len(args) != n:
            raise QuerySyntaxError(f"{head.value} takes {n} argument(s)", head.pos)

    match head.value:
        case "category":
            arity(1)
            return Category(str(_symbol(args[0], "category name").value))
        case "band":
            arity(1)
            word = _symbol(args[0], "band keyword")
            try:
                return Band(BandLevel(word.value))
            except ValueError:
                raise QuerySyntaxError(f"unknown band {word.value!r}", word.pos) from None
        case "stack":
            arity(1)
            arg = args[0]
            if isinstance(arg, _Atom) and isinstance(arg.value, int):
                if arg.value < 1:
                    raise QuerySyntaxError("stack position counts from 1", arg.pos)
                return StackPos(arg.value)
            word = _symbol(arg, "stack position")
            try:
                return StackPos(StackSlot(word.value))
            except ValueError:
                raise QuerySyntaxError(f"unknown stack position {word.value!r}", word.pos) from None
        case "fact":
            arity(2)
            key = _symbol(args[0], "fact key")
            value = _symbol(args[1], "fact value")
            return Fact(str(key.value), str(value.value))
        case "rel":
            if not args:
                raise QuerySyntaxError("rel needs a relation and an anchor", head.pos)
            word = _symbol(args[0], "relation keyword")
            if word.value not in REL_KEYWORDS:
                raise QuerySyntaxError(f"unknown relation {word.value!r}", word.pos)
            rest = args[1:]
            if len(rest) not in (1, 3):
                raise QuerySyntaxError("rel takes an anchor and optional ordinal N", head.pos)
            ordinal = 1
            if len(rest) == 3:
                kw, n = rest[1], rest[2]
                if not isinstance(kw, _Atom) or kw.value != "ordinal":
                    raise QuerySyntaxError("expected 'ordinal'", getattr(kw, "pos", None))
                if not (isinstance(n, _Atom) and isinstance(n.value, int)) or n.value < 1:
                    raise QuerySyntaxError("ordinal must be an integer >= 1", n.pos)
                ordinal = n.value
            anchor = _build_query(rest[0], depth + 1)
            return Rel(REL_KEYWORDS[word.value], anchor, ordinal)
        case _:
            raise QuerySyntaxError(f"unknown constraint {head.value!r}", head.pos)


def parse_query(text: str) -> Query:
    """Parse DSL text into a Query.

    Raises:
        QuerySyntaxError: malformed text or unknown keyword, with its character offset
    """
    if not text or not text.strip():
        raise QuerySyntaxError("empty query", 0)
    _check_nesting(text)
    try:
        node = _READER.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as e:
        raise QuerySyntaxError(f"cannot read query: {e.msg}", e.loc) from None
    except RecursionError:
        raise QuerySyntaxError("query nests too deeply to read", 0) from None
    return _build_query(node)


# -- printer --------------------------------------------------------------


def _word(text: str) -> str:
    if text and not any(c.isspace() or c in '()"\\' for c in text) and not text.isdigit():
        return text
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _format_constraint(c: Constraint) -> str:
    match c:
        case Category(name):
            return f"(category {_word(name)})"
        case Band(level):
            return f"(band {level.value})"
        case StackPos(slot):
            return f"(stack {slot if isinstance(slot, int) else slot.value})"
        case Fact(key, value):
            return f"(fact {_word(key)} {_word(value)})"
        case Rel(relation, anchor, ordinal):
            tail = f" ordinal {ordinal}" if ordinal != 1 else ""
            return f"(rel {_REL_NAMES[relation]} {format_query(anchor)}{tail})"
    raise TypeError(f"not a constraint: {c!r}")


def format_query(query: Query) -> str:
    """Canonical text; parse_query(format_query(q)) == q."""
    return "(select " + " ".join(_format_constraint(c) for c in query.constraints) + ")"
