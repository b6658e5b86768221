"""Additive difficulty scores for (expression, variant) cells."""
from __future__ import annotations

from functools import lru_cache
from pathlib import Path

import yaml
from pydantic import BaseModel, Field

DIFFICULTY_FILE = Path(__file__).with_name("difficulty.yaml")


class DifficultyModel(BaseModel):
    re_base: dict[int, int]
    variant_bonus: dict[str, int]
    threshold: int = Field(default=10, ge=0)

    def total(self, re_id: int, variant: str) -> int:
        try:
            return self.re_base[re_id] + self.variant_bonus[variant]
        except KeyError as e:
            raise KeyError(f"no difficulty points for {e.args[0]!r}") from None

    def predicts_failure(self, re_id: int, variant: str) -> bool:
        return self.total(re_id, variant) >= self.threshold


@lru_cache(maxsize=2)
def load_difficulty(path: Path = DIFFICULTY_FILE) -> DifficultyModel:
    return DifficultyModel.model_validate(yaml.safe_load(path.read_text(encoding="utf-8")))


def difficulty(re_id: int, variant: str, model: DifficultyModel | None = None) -> int:
    """Base points of the expression plus the variant's bonus."""
    return (model or load_difficulty()).total(re_id, variant)
