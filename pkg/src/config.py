"""Run configuration. Overridable through groundkit.yaml at the repository root."""
from __future__ import annotations

import os
from enum import Enum
from pathlib import Path

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .errors import ConfigError

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURES = REPO_ROOT / "fixtures"
# GROUNDKIT_CONFIG swaps the config file
CONFIG_PATH = Path(os.environ.get("GROUNDKIT_CONFIG", REPO_ROOT / "groundkit.yaml"))

VARIANT_LABELS = ("A", "B", "C", "D", "E", "F", "G", "H")


class ClientMode(str, Enum):
    REPLAY = "replay"
    LIVE = "live"


class ConfirmationPolicy(str, Enum):
    ASK = "ask"
    ASSUME_YES = "assume-yes"
    ASSUME_NO = "assume-no"


class LlmConfig(BaseModel):
    base_url: str = "https://api.openai.com/v1"
    model: str = "gpt-4o-mini"
    api_key: str | None = Field(default=None, repr=False)
    timeout_sec: float = 60.0
    max_retries: int = Field(default=3, ge=1)
    backoff_sec: float = Field(default=1.0, ge=0.0)
    temperature: float = 0.0


class PromptExample(BaseModel):
    """The worked example shown in every grounding prompt."""

    expression: str = "the countertop left to the microwave"
    answer: str = "CounterTop17"


class StorageConfig(BaseModel):
    scene: Path = FIXTURES / "pantry_scene.json"
    # copied into out_dir/facts.jsonl when that journal does not exist yet
    seed_facts: Path = FIXTURES / "household_facts.jsonl"
    type_classes: list[str] = Field(
        default_factory=lambda: [
            "Perishable food items.",
            "Cooking tools.",
            "Eating utensils.",
            "Dishes",
            "Pots and pans",
            "Cleaning tools",
        ]
    )
    requests: list[str] = Field(
        default_factory=lambda: [
            "the apple",
            "the spatula",
            "a sponge for washing dishes",
            "a bottle of wine",
            "a vase",
            "a fork",
            "potatoes",
            "a butter knife",
            "a soup spoon",
            "a roll of paper towels",
            "my favorite plant",
            "something to slice the bread",
        ]
    )


class KitchenConfig(BaseModel):
    inventory: Path = FIXTURES / "kitchen_inventory.yaml"
    warm_ticks: int = Field(default=2, ge=1)
    melt_ticks: int = Field(default=2, ge=1)
    cook_ticks: int = Field(default=3, ge=1)
    max_wait_ticks: int = Field(default=30, ge=1)
    unmodeled_wait_ticks: int = Field(default=1, ge=0)
    tick_seconds: int = Field(default=60, ge=1)


class RunConfig(BaseModel):
    scene: Path = FIXTURES / "kitchen_scene.json"
    viewpoint: str | None = None  # None = first viewpoint in the scene
    gold: Path = FIXTURES / "gold_set.yaml"
    transcript: Path | None = FIXTURES / "recorded.transcript"
    mode: ClientMode = ClientMode.REPLAY
    variants: list[str] = Field(default_factory=lambda: list(VARIANT_LABELS))
    out_dir: Path = REPO_ROOT / "out"
    confirmation: ConfirmationPolicy = ConfirmationPolicy.ASK
    provisional: bool = False
    llm: LlmConfig = Field(default_factory=LlmConfig)
    example: PromptExample = Field(default_factory=PromptExample)
    storage: StorageConfig = Field(default_factory=StorageConfig)
    kitchen: KitchenConfig = Field(default_factory=KitchenConfig)

    @field_validator("variants")
    @classmethod
    def _known_variants(cls, v: list[str]) -> list[str]:
        unknown = [label for label in v if label not in VARIANT_LABELS]
        if unknown:
            raise ValueError(f"unknown variants: {', '.join(unknown)}")
        return v

    @model_validator(mode="after")
    def _mode_requirements(self) -> RunConfig:
        if self.mode is ClientMode.REPLAY and self.transcript is None:
            raise ValueError("replay mode requires a transcript path")
        if self.mode is ClientMode.LIVE and not (self.llm.base_url and self.llm.model):
            raise ValueError("live mode requires llm.base_url and llm.model")
        return self


def _apply_env(data: dict) -> dict:
    llm = dict(data.get("llm") or {})
    for env, key in (
        ("OPENAI_API_KEY", "api_key"),
        ("OPENAI_BASE_URL", "base_url"),
        ("OPENAI_MODEL", "model"),
    ):
        if os.environ.get(env):
            llm[key] = os.environ[env]
    return {**data, "llm": llm}


def load_config(path: Path | None = None, **overrides) -> RunConfig:
    """Load RunConfig from YAML, apply credential env vars, then explicit overrides.

    Raises:
        ConfigError: unreadable file or failed validation
    """
    path = path or CONFIG_PATH
    data: dict = {}
    if path.exists():
        try:
            data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"cannot parse {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
    data = _apply_env(data)
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(str(e)) from e
