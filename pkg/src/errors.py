"""Exception hierarchy shared by every pipeline.

Each error carries the process exit code the CLI reports for it.
"""
from __future__ import annotations


class GroundkitError(Exception):
    """Base class for toolkit failures."""

    exit_code: int = 1


class ConfigError(GroundkitError):
    exit_code = 64


class SceneError(GroundkitError, ValueError):
    """Malformed scene document or invalid scene lookup."""


class AnonymizationError(SceneError):
    pass


class UnknownViewpointError(SceneError):
    pass


class ChainError(GroundkitError):
    """A relation chain ended before the requested number of steps."""


class QuerySyntaxError(GroundkitError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" (at {position})" if position is not None else ""
        super().__init__(f"{message}{where}")


class UnresolvableError(GroundkitError):
    exit_code = 2

    def __init__(self, message: str, hint: str | None = None):
        self.hint = hint
        super().__init__(message)


class PromptError(GroundkitError, ValueError):
    pass


class CompletionError(GroundkitError):
    pass


class MissingReplayEntryError(CompletionError, KeyError):
    def __init__(self, digest: str, label: str):
        self.digest = digest
        self.label = label
        super().__init__(f"no recorded completion for {label} prompt {digest[:12]}")

    def __str__(self) -> str:
        return self.args[0]


class EndpointError(CompletionError):
    pass


class CommandSyntaxError(GroundkitError, ValueError):
    pass


class PreconditionError(GroundkitError):
    pass


class ProgramError(GroundkitError):
    def __init__(self, index: int, cause: GroundkitError, log: list | None = None):
        self.index = index
        self.cause = cause
        self.log = log or []
        super().__init__(f"line {index}: {cause}")


class FactConflictError(GroundkitError):
    pass


class UnknownIdError(GroundkitError, KeyError):
    def __str__(self) -> str:
        return self.args[0] if self.args else "unknown id"


class VerificationRejected(GroundkitError):
    exit_code = 3
