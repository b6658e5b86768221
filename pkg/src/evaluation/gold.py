"""Gold referring expressions with their intended objects."""
from __future__ import annotations

from pathlib import Path

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator

from ..errors import ConfigError
from ..grounding import Query, parse_query


class GoldEntry(BaseModel):
    re_id: int = Field(ge=1)
    text: str = Field(min_length=1)
    challenges: list[str] = Field(default_factory=list)
    correct: str
    dsl: str | None = None

    def query(self) -> Query | None:
        return parse_query(self.dsl) if self.dsl else None


class GoldSet(BaseModel):
    scene: str | None = None
    entries: list[GoldEntry] = Field(min_length=1)
    expected_hits: dict[str, int] = Field(default_factory=dict)

    @field_validator("entries")
    @classmethod
    def _unique_ids(cls, v: list[GoldEntry]) -> list[GoldEntry]:
        ids = [e.re_id for e in v]
        if len(set(ids)) != len(ids):
            raise ValueError("re_id values must be unique")
        return v

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def texts(self) -> list[str]:
        return [e.text for e in self.entries]


def load_gold(path: Path) -> GoldSet:
    """Raises ConfigError on a missing or malformed gold file."""
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"gold set not found: {path}") from None
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse {path}: {e}") from e
    try:
        return GoldSet.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"{path}: malformed gold set\n{e}") from e
