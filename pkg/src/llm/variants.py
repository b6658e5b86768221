"""Grounding prompt variants, loaded from variants.yaml."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import yaml

from ..errors import PromptError
from ..graph import GraphEncoding
from ..world import IdStyle

VARIANTS_FILE = Path(__file__).with_name("variants.yaml")


@dataclass(frozen=True)
class PromptVariant:
    label: str
    id_style: IdStyle | None  # None: no category list in the prompt
    encoding: GraphEncoding
    explanation: str | None = None
    dual_viewpoint: bool = False

    def __post_init__(self) -> None:
        anonymized = self.id_style is IdStyle.ANONYMIZED
        if anonymized != (self.encoding is GraphEncoding.CARDINAL_JSON):
            raise PromptError(
                f"variant {self.label}: anonymized ids go with the cardinal-json encoding only"
            )

    @property
    def anonymized(self) -> bool:
        return self.id_style is IdStyle.ANONYMIZED


def _variant(label: str, raw: dict) -> PromptVariant:
    style = raw.get("id_style", "meaningful")
    try:
        return PromptVariant(
            label=label,
            id_style=None if style == "none" else IdStyle(style),
            encoding=GraphEncoding(raw["encoding"]),
            explanation=raw.get("explanation"),
            dual_viewpoint=bool(raw.get("dual_viewpoint", False)),
        )
    except PromptError:
        raise
    except (KeyError, ValueError) as e:
        raise PromptError(f"variant {label}: bad definition ({e})") from e


@lru_cache(maxsize=2)
def load_variants(path: Path = VARIANTS_FILE) -> dict[str, PromptVariant]:
    data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    return {str(label): _variant(str(label), raw or {}) for label, raw in data.items()}


def get_variant(label: str) -> PromptVariant:
    variants = load_variants()
    try:
        return variants[label]
    except KeyError:
        raise PromptError(f"unknown variant {label!r} (known: {', '.join(variants)})") from None
