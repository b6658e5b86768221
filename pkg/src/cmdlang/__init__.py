"""Short imperative kitchen commands: parsing, validation and simulated execution."""
from .commands import (
    ActionCommand,
    Verb,
    format_command,
    load_verbs,
    parse_command,
    parse_program,
)
from .kitchen import (
    ItemState,
    KitchenInventory,
    KitchenState,
    StepRecord,
    execute,
    load_inventory,
    run_program,
)
from .validate import Issue, ValidationReport, validate_program

__all__ = [
    "ActionCommand",
    "Issue",
    "ItemState",
    "KitchenInventory",
    "KitchenState",
    "StepRecord",
    "ValidationReport",
    "Verb",
    "execute",
    "format_command",
    "load_inventory",
    "load_verbs",
    "parse_command",
    "parse_program",
    "run_program",
    "validate_program",
]
