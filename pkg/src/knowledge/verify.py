"""Checking LLM storage suggestions against what the store already knows."""
from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass, replace
from enum import Enum

from ..errors import FactConflictError, UnknownIdError
from ..grounding import GroundingResult
from ..llm import StorageSuggestion
from ..world import SceneModel
from .facts import STORAGE_KEY, Assertion, FactStore, Provenance

logger = logging.getLogger(__name__)

NEEDS_HUMAN_HINT = "needs human instruction"


class VerdictKind(Enum):
    ACCEPT = "accept"
    NEEDS_CONFIRMATION = "needs-confirmation"
    REJECT = "reject"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    reason: str
    conflict: Assertion | None = None

    @classmethod
    def accept(cls, reason: str) -> Verdict:
        return cls(kind=VerdictKind.ACCEPT, reason=reason)

    @classmethod
    def needs_confirmation(cls, reason: str) -> Verdict:
        return cls(kind=VerdictKind.NEEDS_CONFIRMATION, reason=reason)

    @classmethod
    def reject(cls, conflict: Assertion) -> Verdict:
        return cls(
            kind=VerdictKind.REJECT,
            reason=f"conflicts with {conflict.cite()}",
            conflict=conflict,
        )


def _singular(word: str) -> str:
    return word[:-1] if word.endswith("s") and len(word) > 3 else word


def matches_locations(
    tokens: Iterable[str], locations: Iterable[str], scene: SceneModel | None = None
) -> bool:
    """Whether any suggested location is named by a stored token.

    A token names a location by id or, when a scene is given, by its category.
    """
    wanted = {_singular(t.lower()) for t in tokens}
    for loc in locations:
        if _singular(loc.lower()) in wanted:
            return True
        if scene is not None and loc in scene:
            if _singular(scene.get(loc).category.lower()) in wanted:
                return True
    return False


def _check_ids(s: StorageSuggestion, scene: SceneModel | None) -> None:
    if scene is None:
        return
    unknown = [i for i in (*s.objects, *s.locations) if i not in scene]
    if unknown:
        raise UnknownIdError(f"{s.re_text}: unknown ids {', '.join(unknown)}")


def verify_suggestion(
    s: StorageSuggestion,
    store: FactStore,
    scene: SceneModel | None = None,
    provisional: bool = False,
) -> Verdict:
    """Accept, reject or ask about one storage suggestion.

    Args:
        s: parsed suggestion
        store: known facts
        scene: resolves location ids to categories and rejects unknown ids
        provisional: accept unconfirmed LLM facts that agree with the suggestion

    Raises:
        UnknownIdError: a suggested id is not in the scene
    """
    _check_ids(s, scene)
    unsettled = []
    for obj in s.objects:
        known = store.confirmed(obj, STORAGE_KEY)
        if known is None:
            unsettled.append(obj)
            continue
        if not matches_locations(known.tokens, s.locations, scene):
            logger.warning("%s: suggestion rejected, %s", s.re_text, known.cite())
            return Verdict.reject(known)

    if not unsettled:
        return Verdict.accept("matches confirmed storage facts")
    if provisional and all(
        any(
            a.provenance is Provenance.LLM and matches_locations(a.tokens, s.locations, scene)
            for a in store.facts_for(obj, STORAGE_KEY)
        )
        for obj in unsettled
    ):
        return Verdict.accept("matches unconfirmed LLM facts (provisional)")
    return Verdict.needs_confirmation(f"no confirmed storage fact for {', '.join(unsettled)}")


def commit_fact(
    store: FactStore,
    suggestion: StorageSuggestion,
    confirmation: bool,
    override: bool = False,
    provenance: Provenance = Provenance.LLM,
    scene: SceneModel | None = None,
) -> FactStore:
    """Record a suggestion's locations as the storage fact of each object.

    A confirmed commit supersedes every live assertion for the object; an
    unconfirmed one is added next to them.

    Raises:
        FactConflictError: an object has a confirmed conflicting fact and override is off
    """
    value = ",".join(suggestion.locations)
    for obj in suggestion.objects:
        known = store.confirmed(obj, STORAGE_KEY)
        if (
            known is not None
            and not override
            and not matches_locations(known.tokens, suggestion.locations, scene)
        ):
            raise FactConflictError(f"{obj}: {known.cite()} (use override to replace it)")
    for obj in suggestion.objects:
        if confirmation:
            for old in store.facts_for(obj, STORAGE_KEY):
                store.supersede(old.seq)
        store.add(
            Assertion(
                object_id=obj,
                key=STORAGE_KEY,
                value=value,
                provenance=provenance,
                confirmed=confirmation,
            )
        )
    return store


def with_store_facts(scene: SceneModel, store: FactStore) -> SceneModel:
    """The scene with every confirmed store fact attached to its object."""
    extra: dict[str, set[tuple[str, str]]] = {}
    for a in store.live():
        if a.confirmed and a.object_id in scene:
            extra.setdefault(a.object_id, set()).update((a.key, t) for t in a.tokens)
    if not extra:
        return scene
    return scene.with_objects(
        replace(o, facts=o.facts | frozenset(extra[o.id])) if o.id in extra else o
        for o in scene.objects
    )


def resolve_functional(
    re_key: tuple[str, tuple[str, str]], scene: SceneModel, store: FactStore
) -> GroundingResult:
    """Objects of a category known to satisfy a fact, e.g. (Drawer, (contains, silverware)).

    Scene facts and confirmed store facts both count.
    """
    category, (key, value) = re_key
    wanted = value.lower()
    found: dict[str, tuple[int, ...]] = {}
    trace = [f"{category} with {key}={value}"]
    for obj in scene.objects:
        if obj.category != category:
            continue
        if obj.has_fact(key, value):
            found[obj.id] = ()
            trace.append(f"  {obj.id}: scene fact")
            continue
        known = store.confirmed(obj.id, key)
        if known is not None and wanted in (t.lower() for t in known.tokens):
            found[obj.id] = ()
            trace.append(f"  {obj.id}: {known.cite()}")
    if not found:
        return GroundingResult.unresolvable(NEEDS_HUMAN_HINT, trace)
    return GroundingResult.from_ranked(found, trace)
