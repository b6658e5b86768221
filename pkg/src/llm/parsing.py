"""Lenient readers for LLM responses.

Separators and chatter are tolerated; ids are only ever taken verbatim from the
response text.
"""
from __future__ import annotations

import logging
import re
from collections.abc import Collection
from dataclasses import dataclass

from ..cmdlang import ActionCommand, parse_command
from ..errors import CommandSyntaxError

logger = logging.getLogger(__name__)

ARROW = "→"
ID_TOKEN = re.compile(r"\b[A-Za-z]+\d+[a-z]*\b")
_BULLET = re.compile(r"^\s*(?:[-*•]|\d+[.)])\s+")
_TYPE_HEADER = re.compile(r"^Type\s+(\d+)\s*:\s*(.*?)\s*$", re.IGNORECASE)
_GLOSS = re.compile(r"\([^)]*\)")
_ALTERNATIVES = re.compile(r",|\s+or\s+")
_RANGE = re.compile(r"^([A-Za-z]+)(\d+)\s*-\s*(?:([A-Za-z]+))?(\d+)$")


@dataclass(frozen=True)
class GroundingAnswer:
    re_text: str
    ids: tuple[str, ...]


@dataclass(frozen=True)
class StorageSuggestion:
    re_text: str
    objects: tuple[str, ...]
    locations: tuple[str, ...]
    type_class: str | None = None


@dataclass(frozen=True)
class Unparsed:
    """A response line that looked like an answer but yielded no usable ids."""

    line: str
    reason: str


def _strip_bullet(line: str) -> str:
    return _BULLET.sub("", line.strip())


def _clean_re(text: str) -> str:
    return text.strip().strip("*\"'").strip()


def _split_answer(line: str) -> tuple[str, str] | None:
    if ARROW in line:
        left, _, right = line.partition(ARROW)
        return left, right
    if ":" in line:
        left, _, right = line.rpartition(":")
        return left, right
    if " - " in line:
        left, _, right = line.partition(" - ")
        return left, right
    return None


def parse_grounding_response(
    text: str, known_ids: Collection[str] | None = None
) -> list[GroundingAnswer | Unparsed]:
    """One entry per answer line, in response order.

    Args:
        text: raw response
        known_ids: when given, only these tokens count as ids

    Returns:
        GroundingAnswer for lines with ids, Unparsed for answer lines without any.
        Lines with no separator, or nothing after it, are skipped.
    """
    out: list[GroundingAnswer | Unparsed] = []
    for raw in text.splitlines():
        line = _strip_bullet(raw)
        if not line:
            continue
        split = _split_answer(line)
        if split is None:
            continue
        left, right = split
        if not right.strip():
            continue
        ids = [t for t in ID_TOKEN.findall(right) if known_ids is None or t in known_ids]
        if not ids:
            logger.warning("no object id in answer line: %s", line)
            out.append(Unparsed(line=line, reason="no object id"))
            continue
        out.append(GroundingAnswer(re_text=_clean_re(left), ids=tuple(dict.fromkeys(ids))))
    return out


def _ids_in(side: str) -> list[str]:
    ids: list[str] = []
    for token in _ALTERNATIVES.split(_GLOSS.sub(" ", side)):
        token = token.strip().rstrip(".")
        if not token:
            continue
        m = _RANGE.match(token)
        if m and (m.group(3) is None or m.group(3) == m.group(1)):
            prefix, lo, hi = m.group(1), int(m.group(2)), int(m.group(4))
            ids.extend(f"{prefix}{n}" for n in range(lo, hi + 1))
            continue
        ids.extend(ID_TOKEN.findall(token))
    return list(dict.fromkeys(ids))


def parse_storage_response(text: str) -> list[StorageSuggestion | Unparsed]:
    """Read "<request> → <objects> → <locations>" lines.

    "Type N:" headers set the type class of the suggestions after them;
    "objectA-objectB" expands to every suffix in between; parenthetical glosses
    are dropped; "," and "or" separate alternatives.
    """
    out: list[StorageSuggestion | Unparsed] = []
    type_class: str | None = None
    for raw in text.splitlines():
        line = _strip_bullet(raw)
        header = _TYPE_HEADER.match(line)
        if header:
            type_class = header.group(2).rstrip(".") or f"Type {header.group(1)}"
            continue
        if not ID_TOKEN.search(_GLOSS.sub(" ", line)):
            continue
        parts = [p.strip() for p in line.split(ARROW)]
        if len(parts) != 3 or not all(parts):
            logger.warning("storage line without two arrows: %s", line)
            out.append(Unparsed(line=line, reason="expected request → objects → locations"))
            continue
        objects, locations = _ids_in(parts[1]), _ids_in(parts[2])
        if not objects or not locations:
            out.append(Unparsed(line=line, reason="missing object or location id"))
            continue
        out.append(
            StorageSuggestion(
                re_text=_clean_re(parts[0]),
                objects=tuple(objects),
                locations=tuple(locations),
                type_class=type_class,
            )
        )
    return out


def parse_simplify_response(text: str) -> list[ActionCommand]:
    """Command lines of a simplification answer; chatter lines are dropped."""
    commands = []
    for raw in text.splitlines():
        line = _strip_bullet(raw)
        if not line:
            continue
        try:
            commands.append(parse_command(line))
        except CommandSyntaxError:
            logger.debug("skipping non-command line: %s", line)
    return commands
