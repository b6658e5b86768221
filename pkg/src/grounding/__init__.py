"""Referring-expression grounding: constraint language, resolver and oracle."""
from .dsl import (
    Band,
    BandLevel,
    Category,
    ConstraintExpr,
    Fact,
    Query,
    Rel,
    StackPos,
    StackSlot,
    format_query,
    parse_query,
)
from .oracle import brute_oracle
from .resolver import GroundingResult, resolve

__all__ = [
    "Band",
    "BandLevel",
    "Category",
    "ConstraintExpr",
    "Fact",
    "GroundingResult",
    "Query",
    "Rel",
    "StackPos",
    "StackSlot",
    "brute_oracle",
    "format_query",
    "parse_query",
    "resolve",
]
