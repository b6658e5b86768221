"""Static checks on a command program before it is executed."""
from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

from ..world import SceneModel
from .commands import ActionCommand
from .kitchen import KitchenInventory, duration_seconds, parse_condition

logger = logging.getLogger(__name__)

# spoken names for scene categories
NOUN_ALIASES = {"counter": "CounterTop", "countertop": "CounterTop", "oven": "Stove"}


@dataclass(frozen=True)
class Issue:
    index: int  # 1-based line of the program
    command: str
    message: str

    def __str__(self) -> str:
        return f"line {self.index}: {self.message} ({self.command})"


@dataclass
class ValidationReport:
    errors: list[Issue] = field(default_factory=list)
    warnings: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def _singular(word: str) -> str:
    return word[:-1] if word.endswith("s") and len(word) > 3 else word


class _Vocabulary:
    def __init__(self, scene: SceneModel, inventory: KitchenInventory | None):
        self.categories = {c.lower() for c in scene.categories}
        self.inventory = inventory

    def knows(self, noun: str) -> bool:
        word = noun.strip().lower()
        if self.inventory is not None and self.inventory.lookup(noun):
            return True
        for candidate in (word, _singular(word)):
            if candidate in self.categories:
                return True
            alias = NOUN_ALIASES.get(candidate)
            if alias and alias.lower() in self.categories:
                return True
        return False


def _noun_args(cmd: ActionCommand) -> tuple[str, ...]:
    return () if cmd.definition.is_wait else cmd.args


def validate_program(
    cmds: Sequence[ActionCommand],
    scene: SceneModel,
    inventory: KitchenInventory | None = None,
    skip_optional: bool = False,
) -> ValidationReport:
    """Report unknown nouns, hand sequencing mistakes and unmodeled waits.

    Sequencing mistakes are errors; everything else is a warning.
    """
    report = ValidationReport()
    vocab = _Vocabulary(scene, inventory)
    holding: str | None = None
    inside: dict[str, str] = {}

    for index, cmd in enumerate(cmds, start=1):
        if cmd.optional and skip_optional:
            continue
        text = str(cmd)

        def error(message: str) -> None:
            report.errors.append(Issue(index, text, message))

        def warn(message: str) -> None:
            report.warnings.append(Issue(index, text, message))

        for noun in _noun_args(cmd):
            if not vocab.knows(noun):
                warn(f"unknown noun {noun!r}")

        obj = cmd.args[0].lower()
        match cmd.verb:
            case "PickUp":
                if holding is not None:
                    error(f"picking up {obj} while holding {holding}")
                holding = obj
            case "PutDownIn" | "PutDownOn" | "CrackInto":
                if holding != obj:
                    error(f"{obj} is not in hand")
                inside[obj] = cmd.args[1].lower()
                holding = None
            case "PourInto":
                target = cmd.args[1].lower()
                if holding == obj:
                    inside[obj] = target
                    holding = None
                elif holding is not None and inside.get(obj) == holding:
                    for item, where in list(inside.items()):
                        if where == holding:
                            inside[item] = target
                else:
                    error(f"{obj} is neither in hand nor in a held container")
            case "WaitUntil":
                if parse_condition(cmd.args[0]) is None:
                    warn(f"condition {cmd.args[0]!r} is not simulated")
            case "WaitFor":
                if duration_seconds(cmd.args[0]) is None:
                    warn(f"duration {cmd.args[0]!r} is not understood")

    for issue in report.warnings:
        logger.warning("%s", issue)
    return report
