"""Run grounding prompt variants over the gold set and score the answers."""
from __future__ import annotations

import asyncio
import logging
import re
from collections.abc import Sequence
from dataclasses import dataclass, field

from ..config import PromptExample
from ..errors import CompletionError
from ..graph import NeighborGraph, build_graph
from ..llm import (
    CompletionClient,
    GroundingAnswer,
    PromptVariant,
    Unparsed,
    build_grounding_prompt,
    complete,
    parse_grounding_response,
)
from ..world import SceneModel, anonymize, deanonymize
from .gold import GoldSet

logger = logging.getLogger(__name__)

_NON_WORD = re.compile(r"[^a-z0-9 ]+")


@dataclass(frozen=True)
class Prediction:
    re_id: int
    re_text: str
    predicted: tuple[str, ...]
    correct: str

    @property
    def hit(self) -> bool:
        """Exactly the correct object, nothing else."""
        return set(self.predicted) == {self.correct}

    @property
    def multi(self) -> bool:
        return len(set(self.predicted)) > 1


@dataclass
class VariantResult:
    label: str
    predictions: list[Prediction] = field(default_factory=list)
    unparsed: list[str] = field(default_factory=list)
    complete: bool = True
    error: str | None = None

    @classmethod
    def failure_result(cls, label: str, error: str) -> VariantResult:
        return cls(label=label, complete=False, error=error)


@dataclass(frozen=True)
class Score:
    hits: int
    total: int
    per_re: dict[int, bool]

    @property
    def accuracy(self) -> float:
        return self.hits / self.total if self.total else 0.0


def _normalize(text: str) -> str:
    return " ".join(_NON_WORD.sub(" ", text.lower()).split())


def align_answers(
    entries: Sequence[GroundingAnswer | Unparsed], gold: GoldSet
) -> tuple[list[tuple[str, ...]], bool]:
    """Predicted ids per gold entry, and whether every entry got an answer.

    Same count: by position. Otherwise each gold text is looked up among the
    answers by normalised text.
    """
    if len(entries) == len(gold):
        ids = [e.ids if isinstance(e, GroundingAnswer) else () for e in entries]
        return ids, all(ids)
    by_text = {
        _normalize(e.re_text): e.ids for e in entries if isinstance(e, GroundingAnswer)
    }
    ids = [by_text.get(_normalize(g.text), ()) for g in gold.entries]
    return ids, all(ids)


async def run_variant(
    variant: PromptVariant,
    scene: SceneModel,
    client: CompletionClient,
    gold: GoldSet,
    graph: NeighborGraph | None = None,
    example: PromptExample | None = None,
) -> VariantResult:
    """Ground every gold expression with one batched prompt.

    Completion failures and unusable answers mark the result incomplete
    instead of raising.
    """
    graph = graph or build_graph(scene)
    prompt = build_grounding_prompt(scene, graph, variant, gold.texts, example)
    try:
        text = await complete(prompt, client)
    except CompletionError as e:
        logger.warning("variant %s: %s", variant.label, e)
        return VariantResult.failure_result(variant.label, str(e))

    mapping: dict[str, str] = {}
    known = set(scene.ids)
    if variant.anonymized:
        _, mapping = anonymize(scene)
        known = set(mapping.values())
    entries = parse_grounding_response(text, known_ids=known)
    aligned, complete_ = align_answers(entries, gold)

    result = VariantResult(label=variant.label, complete=complete_)
    result.unparsed = [e.line for e in entries if isinstance(e, Unparsed)]
    for entry, ids in zip(gold.entries, aligned):
        predicted = tuple(deanonymize(ids, mapping)) if mapping else tuple(ids)
        result.predictions.append(
            Prediction(
                re_id=entry.re_id,
                re_text=entry.text,
                predicted=predicted,
                correct=entry.correct,
            )
        )
    if not complete_:
        result.error = "some expressions got no usable answer"
    logger.info("variant %s: %d/%d hits", variant.label, score(result, gold).hits, len(gold))
    return result


def score(result: VariantResult, gold: GoldSet) -> Score:
    """Hits per expression; a missing prediction is a miss."""
    by_id = {p.re_id: p for p in result.predictions}
    per_re = {e.re_id: e.re_id in by_id and by_id[e.re_id].hit for e in gold.entries}
    return Score(hits=sum(per_re.values()), total=len(gold), per_re=per_re)


async def run_variants(
    variants: Sequence[PromptVariant],
    scene: SceneModel,
    client: CompletionClient,
    gold: GoldSet,
    example: PromptExample | None = None,
) -> list[VariantResult]:
    """Run variants concurrently; results come back in label order."""
    graph = build_graph(scene)
    results = await asyncio.gather(
        *(run_variant(v, scene, client, gold, graph, example) for v in variants)
    )
    return sorted(results, key=lambda r: r.label)
