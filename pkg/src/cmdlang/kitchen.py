"""Simulated kitchen that executes command programs.

Time is counted in ticks. Every command except the waits costs one tick; after
each tick the stove heats what is on it and warm containers melt or cook
their contents.
"""
from __future__ import annotations

import copy
import logging
import math
import re
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import yaml
from pydantic import BaseModel, Field, ValidationError

from ..config import KitchenConfig
from ..errors import ConfigError, GroundkitError, PreconditionError, ProgramError
from .commands import ActionCommand

logger = logging.getLogger(__name__)

OUTCOME_FLAGS = ("warm", "melted", "cooked", "served")
MODELED_FLAGS = frozenset({"warm", "melted", "cooked", "cracked", "served"})

_CONDITION = re.compile(r"^(?:the\s+)?([\w-]+)\s+(?:is|are)\s+(\w+)$", re.IGNORECASE)
_DURATION = re.compile(
    r"^(\d+(?:\.\d+)?)\s*(seconds?|secs?|s|minutes?|mins?|m|hours?|hrs?|h)$", re.IGNORECASE
)
_UNIT_SECONDS = {"s": 1, "m": 60, "h": 3600}


class KitchenInventory(BaseModel):
    """What exists in the kitchen and what each thing can do."""

    ingredients: list[str] = Field(default_factory=list)
    tools: list[str] = Field(default_factory=list)
    fixed: list[str] = Field(default_factory=list)
    containers: list[str] = Field(default_factory=list)
    surfaces: list[str] = Field(default_factory=list)
    instruments: list[str] = Field(default_factory=list)
    crackable: list[str] = Field(default_factory=list)
    meltable: list[str] = Field(default_factory=list)
    cookable: list[str] = Field(default_factory=list)
    dishes: dict[str, list[str]] = Field(default_factory=dict)
    places: dict[str, str] = Field(default_factory=dict)

    @property
    def items(self) -> list[str]:
        return list(dict.fromkeys(self.ingredients + self.tools + self.fixed))

    def lookup(self, noun: str) -> str | None:
        """Inventory name for a noun phrase: exact, lower-cased, then singular."""
        known = self.items
        word = noun.strip().lower()
        for candidate in (noun.strip(), word, word[:-1] if word.endswith("s") else None):
            if candidate and candidate in known:
                return candidate
        for name in known:
            if name.lower() == word or name.lower() + "s" == word:
                return name
        return None


def load_inventory(path: Path) -> KitchenInventory:
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        return KitchenInventory.model_validate(data)
    except FileNotFoundError:
        raise ConfigError(f"inventory file not found: {path}") from None
    except (yaml.YAMLError, ValidationError) as e:
        raise ConfigError(f"{path}: bad inventory ({e})") from e


@dataclass
class ItemState:
    on: str | None = None  # container, surface or "hand"
    switched_on: bool = False
    warm: bool = False
    melted: bool = False
    cracked: bool = False
    cooked: bool = False
    served: bool = False
    stirred: int = 0
    heat: int = 0
    exposure: int = 0


@dataclass
class StepRecord:
    index: int
    command: ActionCommand
    clock: int

    def __str__(self) -> str:
        return f"{self.index:>3}  t={self.clock:<3} {self.command}"


@dataclass
class KitchenState:
    inventory: KitchenInventory
    config: KitchenConfig = field(default_factory=KitchenConfig)
    location: str | None = None
    holding: str | None = None
    items: dict[str, ItemState] = field(default_factory=dict)
    clock: int = 0

    @classmethod
    def initial(
        cls, inventory: KitchenInventory, config: KitchenConfig | None = None
    ) -> KitchenState:
        items = {name: ItemState(on=inventory.places.get(name)) for name in inventory.items}
        return cls(inventory=inventory, config=config or KitchenConfig(), items=items)

    def item(self, noun: str) -> str:
        name = self.inventory.lookup(noun)
        if name is None:
            raise PreconditionError(f"no {noun!r} in this kitchen")
        return name

    def contents(self, container: str) -> list[str]:
        return [name for name, s in self.items.items() if s.on == container]

    def flag(self, noun: str, flag: str) -> bool:
        return bool(getattr(self.items[self.item(noun)], flag))

    def tick(self) -> None:
        self.clock += 1
        inv = self.inventory
        for instrument in inv.instruments:
            if not self.items[instrument].switched_on:
                continue
            for name in self.contents(instrument):
                if name in inv.containers:
                    state = self.items[name]
                    state.heat += 1
                    if state.heat >= self.config.warm_ticks and not state.warm:
                        state.warm = True
                        logger.debug("t=%d %s is warm", self.clock, name)
        for container in inv.containers:
            if not self.items[container].warm:
                continue
            for name in self.contents(container):
                state = self.items[name]
                state.exposure += 1
                if name in inv.meltable and state.exposure >= self.config.melt_ticks:
                    state.melted = True
                if (
                    name in inv.cookable
                    and state.cracked
                    and state.exposure >= self.config.cook_ticks
                ):
                    state.cooked = True

    def summary(self) -> list[str]:
        """Outcome flags per item, then every instrument's on/off state."""
        lines = []
        for name, state in self.items.items():
            if name in self.inventory.instruments:
                continue
            flags = [f for f in OUTCOME_FLAGS if getattr(state, f)]
            if flags:
                lines.append(f"{name}: {', '.join(flags)}")
        for name in self.inventory.instruments:
            lines.append(f"{name}: {'on' if self.items[name].switched_on else 'off'}")
        return lines


# -- preconditions ---------------------------------------------------------

Check = Callable[[KitchenState, ActionCommand], str | None]


def _hand_empty(state: KitchenState, cmd: ActionCommand) -> str | None:
    return f"already holding {state.holding}" if state.holding else None


def _movable(state: KitchenState, cmd: ActionCommand) -> str | None:
    name = state.item(cmd.args[0])
    return f"{name} cannot be picked up" if name in state.inventory.fixed else None


def _holding(state: KitchenState, cmd: ActionCommand) -> str | None:
    name = state.item(cmd.args[0])
    return None if state.holding == name else f"not holding {name}"


def _holding_or_carrying(state: KitchenState, cmd: ActionCommand) -> str | None:
    name = state.item(cmd.args[0])
    if state.holding == name:
        return None
    if state.holding and state.items[name].on == state.holding:
        return None
    return f"neither holding {name} nor a container with it"


def _target_in(kind: str) -> Check:
    def check(state: KitchenState, cmd: ActionCommand) -> str | None:
        name = state.item(cmd.args[-1])
        return None if name in getattr(state.inventory, kind) else f"{name} is not one of {kind}"

    return check


def _is_instrument(state: KitchenState, cmd: ActionCommand) -> str | None:
    name = state.item(cmd.args[0])
    return None if name in state.inventory.instruments else f"{name} cannot be switched"


def _switched(expected: bool) -> Check:
    def check(state: KitchenState, cmd: ActionCommand) -> str | None:
        name = state.item(cmd.args[0])
        if state.items[name].switched_on == expected:
            return None
        return f"{name} is already {'on' if not expected else 'off'}"

    return check


def _crackable(state: KitchenState, cmd: ActionCommand) -> str | None:
    name = state.item(cmd.args[0])
    return None if name in state.inventory.crackable else f"{name} cannot be cracked"


def _in_container(state: KitchenState, cmd: ActionCommand) -> str | None:
    name = state.item(cmd.args[0])
    if state.items[name].on in state.inventory.containers:
        return None
    return f"{name} is not in a container"


def _dish_ready(state: KitchenState, cmd: ActionCommand) -> str | None:
    name = state.item(cmd.args[0])
    required = state.inventory.dishes.get(name)
    if required is None:
        return f"{name} is not a dish"
    missing = [f for f in required if not getattr(state.items[name], f)]
    return f"{name} is not {', '.join(missing)} yet" if missing else None


PRECONDITIONS: dict[str, Check] = {
    "hand_empty": _hand_empty,
    "movable": _movable,
    "holding": _holding,
    "holding_or_carrying": _holding_or_carrying,
    "is_container": _target_in("containers"),
    "is_surface": _target_in("surfaces"),
    "is_instrument": _is_instrument,
    "switched_off": _switched(False),
    "switched_on": _switched(True),
    "crackable": _crackable,
    "in_container": _in_container,
    "dish_ready": _dish_ready,
}


# -- effects ---------------------------------------------------------------


def parse_condition(text: str) -> tuple[str, str] | None:
    """("pan", "warm") for "pan is warm"; None when the flag is not simulated."""
    m = _CONDITION.match(text.strip())
    if not m or m.group(2).lower() not in MODELED_FLAGS:
        return None
    return m.group(1), m.group(2).lower()


def duration_seconds(text: str) -> float | None:
    m = _DURATION.match(text.strip())
    if not m:
        return None
    return float(m.group(1)) * _UNIT_SECONDS[m.group(2)[0].lower()]


def _wait_for(state: KitchenState, cmd: ActionCommand) -> int:
    seconds = duration_seconds(cmd.args[0])
    if seconds is None:
        logger.warning("unmodeled wait %r, waiting %d tick(s)", cmd.args[0],
                       state.config.unmodeled_wait_ticks)
        return state.config.unmodeled_wait_ticks
    return math.ceil(seconds / state.config.tick_seconds)


def _wait_until(state: KitchenState, cmd: ActionCommand) -> int:
    condition = parse_condition(cmd.args[0])
    if condition is None:
        logger.warning("unmodeled condition %r, waiting %d tick(s)", cmd.args[0],
                       state.config.unmodeled_wait_ticks)
        return state.config.unmodeled_wait_ticks
    noun, flag = condition
    waited = 0
    while not state.flag(noun, flag):
        if waited >= state.config.max_wait_ticks:
            raise PreconditionError(
                f"{cmd.args[0]!r} still false after {state.config.max_wait_ticks} ticks"
            )
        state.tick()
        waited += 1
    return 0


def _apply(state: KitchenState, effect: str, cmd: ActionCommand) -> int:
    """Mutate ``state``; returns the ticks still to run afterwards."""
    args = cmd.args
    match effect:
        case "grasp":
            name = state.item(args[0])
            state.holding = name
            state.items[name].on = "hand"
        case "place":
            name, target = state.item(args[0]), state.item(args[1])
            state.items[name].on = target
            state.holding = None
        case "move":
            state.location = args[0]
        case "switch_on" | "switch_off":
            state.items[state.item(args[0])].switched_on = effect == "switch_on"
        case "wait_for":
            return _wait_for(state, cmd)
        case "wait_until":
            return _wait_until(state, cmd)
        case "stir":
            state.items[state.item(args[0])].stirred += 1
        case "pour":
            name, target = state.item(args[0]), state.item(args[1])
            if state.holding == name:
                state.items[name].on = target
                state.holding = None
            else:
                for moved in state.contents(state.holding):
                    state.items[moved].on = target
        case "crack":
            name, target = state.item(args[0]), state.item(args[1])
            item = state.items[name]
            item.cracked = True
            item.on = target
            state.holding = None
        case "serve":
            state.items[state.item(args[0])].served = True
        case _:
            raise ValueError(f"unknown effect {effect!r}")
    return 1


def execute(cmd: ActionCommand, state: KitchenState) -> KitchenState:
    """Apply one command to a copy of ``state``.

    Raises:
        PreconditionError: a precondition of the verb does not hold
    """
    verb = cmd.definition
    for name in verb.preconditions:
        problem = PRECONDITIONS[name](state, cmd)
        if problem:
            raise PreconditionError(f"{verb.name}: {problem}")
    after = copy.deepcopy(state)
    ticks = 0
    for effect in verb.effects:
        ticks += _apply(after, effect, cmd)
    for _ in range(ticks):
        after.tick()
    logger.debug("t=%d %s", after.clock, cmd)
    return after


def run_program(
    cmds: Sequence[ActionCommand], state: KitchenState, skip_optional: bool = False
) -> tuple[KitchenState, list[StepRecord]]:
    """Execute commands in order; the log lists executed steps only.

    Raises:
        ProgramError: first failing command, with its 1-based index and the log so far
    """
    log: list[StepRecord] = []
    for index, cmd in enumerate(cmds, start=1):
        if cmd.optional and skip_optional:
            logger.debug("skipping optional line %d: %s", index, cmd)
            continue
        try:
            state = execute(cmd, state)
        except GroundkitError as e:
            raise ProgramError(index, e, log) from e
        log.append(StepRecord(index=index, command=cmd, clock=state.clock))
    logger.info("program finished: %d steps, t=%d", len(log), state.clock)
    return state, log
