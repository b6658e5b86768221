"""Restricted command language: verb inventory, line parser and printer."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import yaml

from ..errors import CommandSyntaxError

logger = logging.getLogger(__name__)

VERBS_FILE = Path(__file__).with_name("verbs.yaml")

_OPTIONAL = re.compile(r"^\(optional\)\s*", re.IGNORECASE)
_ARTICLE = re.compile(r"^(?:the|a|an)\s+", re.IGNORECASE)
_PLACEHOLDER = re.compile(r"<[^>]+>")


@dataclass(frozen=True)
class Verb:
    name: str
    template: str
    keyword: str
    args: tuple[str, ...]
    joiner: str | None = None
    preconditions: tuple[str, ...] = ()
    effects: tuple[str, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_wait(self) -> bool:
        return "wait_for" in self.effects or "wait_until" in self.effects


@lru_cache(maxsize=2)
def load_verbs(path: Path = VERBS_FILE) -> tuple[Verb, ...]:
    """The verb inventory in the order it is offered to the LLM."""
    data = yaml.safe_load(path.read_text(encoding="utf-8"))
    verbs = []
    for raw in data["verbs"]:
        verb = Verb(
            name=raw["name"],
            template=raw["template"],
            keyword=raw["keyword"],
            args=tuple(raw["args"]),
            joiner=raw.get("joiner"),
            preconditions=tuple(raw.get("preconditions") or ()),
            effects=tuple(raw.get("effects") or ()),
        )
        if verb.arity == 2 and not verb.joiner:
            raise ValueError(f"{path}: two-argument verb {verb.name} needs a joiner")
        verbs.append(verb)
    return tuple(verbs)


def verb_named(name: str) -> Verb:
    for verb in load_verbs():
        if verb.name == name:
            return verb
    raise KeyError(name)


@dataclass(frozen=True)
class ActionCommand:
    verb: str
    args: tuple[str, ...]
    optional: bool = False

    @property
    def definition(self) -> Verb:
        return verb_named(self.verb)

    def __str__(self) -> str:
        return format_command(self)


def _noun(text: str) -> str:
    return _ARTICLE.sub("", text.strip()).strip()


def _keyword_match(lowered: str, keyword: str) -> bool:
    return lowered == keyword or lowered.startswith(keyword + " ")


def parse_command(line: str) -> ActionCommand:
    """Parse one command line.

    Leading "(Optional)" marks the command skippable; a trailing period and
    leading articles on arguments are dropped. The longest matching verb
    keyword wins ("wait until" before "wait").

    Raises:
        CommandSyntaxError: empty line, unknown verb, wrong argument count or empty argument
    """
    text = line.strip()
    optional = bool(_OPTIONAL.match(text))
    text = _OPTIONAL.sub("", text).strip().rstrip(".").strip()
    if not text:
        raise CommandSyntaxError("empty command")
    lowered = text.lower()

    candidates = [v for v in load_verbs() if _keyword_match(lowered, v.keyword)]
    if not candidates:
        raise CommandSyntaxError(f"unknown verb in {line.strip()!r}")
    longest = max(len(v.keyword) for v in candidates)
    candidates = [v for v in candidates if len(v.keyword) == longest]

    rest = text[longest:].strip()
    rest_lower = rest.lower()
    for verb in candidates:
        if verb.arity == 1:
            arg = _noun(rest)
            if not arg:
                raise CommandSyntaxError(f"{verb.name}: empty argument in {line.strip()!r}")
            return ActionCommand(verb.name, (arg,), optional)
        sep = f" {verb.joiner} "
        at = rest_lower.find(sep)
        if at < 0:
            continue
        first, second = _noun(rest[:at]), _noun(rest[at + len(sep):])
        if not first or not second:
            raise CommandSyntaxError(f"{verb.name}: empty argument in {line.strip()!r}")
        return ActionCommand(verb.name, (first, second), optional)

    names = " or ".join(v.name for v in candidates)
    raise CommandSyntaxError(f"{names} takes 2 arguments: {line.strip()!r}")


def format_command(cmd: ActionCommand) -> str:
    """Canonical text of a command; parse_command reads it back unchanged."""
    args = iter(cmd.args)
    text = _PLACEHOLDER.sub(lambda _: next(args), cmd.definition.template)
    return f"(Optional) {text}" if cmd.optional else text


def parse_program(text: str) -> list[ActionCommand]:
    """One command per non-blank line.

    Raises:
        CommandSyntaxError: a line fails to parse; the message names its line number
    """
    commands = []
    for n, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            commands.append(parse_command(line))
        except CommandSyntaxError as e:
            raise CommandSyntaxError(f"line {n}: {e}") from e
    logger.debug("parsed %d commands", len(commands))
    return commands
