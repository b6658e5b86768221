"""Prompt builders for grounding, storage and recipe simplification."""
from __future__ import annotations

import hashlib
import logging
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Protocol

from jinja2 import Environment, PackageLoader, StrictUndefined, select_autoescape

from ..config import PromptExample
from ..errors import PromptError
from ..graph import NeighborGraph, build_graph, render_graph
from ..world import SceneModel, anonymous_id, render_category_list
from .variants import PromptVariant

logger = logging.getLogger(__name__)

DEFAULT_DISH = "scrambled eggs"
_STEP_BULLET = re.compile(r"^-\s*(\d+\.\s*)?")


class PromptKind(Enum):
    GROUNDING = "grounding"
    STORAGE = "storage"
    SIMPLIFY = "simplify"


@dataclass(frozen=True)
class PromptDoc:
    text: str
    kind: PromptKind
    label: str  # variant letter, "storage" or "simplify"

    @property
    def inputs_digest(self) -> str:
        """Transcript key: sha256 over the label and the exact prompt text."""
        return prompt_digest(self.label, self.text)


class HasTemplate(Protocol):
    template: str


def prompt_digest(label: str, text: str) -> str:
    return hashlib.sha256(f"{label}\n{text}".encode("utf-8")).hexdigest()


@lru_cache(maxsize=1)
def _environment() -> Environment:
    return Environment(
        loader=PackageLoader("src.llm", "templates"),
        autoescape=select_autoescape(enabled_extensions=("html", "htm")),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
        undefined=StrictUndefined,
    )


def _render(template_name: str, **context) -> str:
    text = _environment().get_template(template_name).render(**context)
    return text.rstrip("\n") + "\n"


def _require(items: Sequence, what: str) -> None:
    if not items:
        raise PromptError(f"{what} must not be empty")


def build_grounding_prompt(
    scene: SceneModel,
    graph: NeighborGraph,
    variant: PromptVariant,
    res: Sequence[str],
    example: PromptExample | None = None,
) -> PromptDoc:
    """Assemble a grounding prompt for one variant.

    Args:
        scene: world model the graph was built from
        graph: neighbour graph for the scene's first viewpoint
        variant: which id style, encoding and explanation to use
        res: referring expressions to ground, in order
        example: the worked example shown before the expressions

    Raises:
        PromptError: empty expression list, or a dual-viewpoint variant on a
            scene with a single viewpoint
    """
    _require(res, "referring expression list")
    example = example or PromptExample()
    rename = anonymous_id if variant.anonymized else None

    needed = 2 if variant.dual_viewpoint else 1
    if len(scene.viewpoints) < needed:
        raise PromptError(
            f"variant {variant.label} needs {needed} viewpoints, scene {scene.name!r} has "
            f"{len(scene.viewpoints)}"
        )
    views = scene.viewpoints[:needed]
    graphs = []
    for vp in views:
        g = graph if graph.viewpoint == vp.name else build_graph(scene, vp.name)
        graphs.append(
            {
                "label": vp.name if variant.dual_viewpoint else None,
                "text": render_graph(g, variant.encoding, rename=rename),
            }
        )

    text = _render(
        "grounding.j2",
        category_list=render_category_list(scene, variant.id_style) if variant.id_style else None,
        graphs=graphs,
        explanation=variant.explanation,
        example_expression=example.expression,
        example_id=anonymous_id(example.answer) if variant.anonymized else example.answer,
        expressions=list(res),
    )
    logger.debug(
        "grounding prompt %s: %d chars, %d expressions", variant.label, len(text), len(res)
    )
    return PromptDoc(text=text, kind=PromptKind.GROUNDING, label=variant.label)


def build_storage_prompt(
    scene: SceneModel, type_classes: Sequence[str], res: Sequence[str]
) -> PromptDoc:
    _require(type_classes, "type class list")
    _require(res, "referring expression list")
    text = _render(
        "storage.j2",
        objects=scene.sorted_objects(),
        type_classes=list(type_classes),
        expressions=list(res),
    )
    return PromptDoc(text=text, kind=PromptKind.STORAGE, label="storage")


def build_simplify_prompt(
    verbs: Iterable[HasTemplate], steps_text: str, dish: str = DEFAULT_DISH
) -> PromptDoc:
    verbs = list(verbs)
    _require(verbs, "verb inventory")
    text = _render("simplify.j2", dish=dish, verbs=verbs, steps_text=steps_text.strip("\n"))
    return PromptDoc(text=text, kind=PromptKind.SIMPLIFY, label="simplify")


def extract_recipe_steps(recipe_text: str) -> str:
    """The lines after a recipe's "Steps:" header, without bullets, numbers or bold markers.

    A recipe with no "Steps:" header is used whole.
    """
    lines = recipe_text.splitlines()
    start = next((i + 1 for i, line in enumerate(lines) if line.strip() == "Steps:"), 0)
    steps = []
    for line in lines[start:]:
        line = line.strip()
        if not line:
            continue
        steps.append(_STEP_BULLET.sub("", line).replace("**", ""))
    return "\n".join(steps)

