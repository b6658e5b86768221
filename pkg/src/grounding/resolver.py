"""Symbolic resolution of constraint queries against a scene and its neighbour graph."""
from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass

from ..errors import UnknownIdError, UnresolvableError
from ..graph import LATERAL, NeighborGraph, Relation
from ..world import ObjectRecord, SceneModel, sort_key
from .dsl import Band, BandLevel, Category, Constraint, Fact, Query, Rel, StackPos, format_query
from .stacks import in_slot

logger = logging.getLogger(__name__)

BAND_EPS = 1e-9
NO_MATCH_HINT = "no object satisfies every constraint"

Rank = tuple[int, ...]


@dataclass(frozen=True)
class GroundingResult:
    """Survivors best first. ``best`` is the top-ranked group; >1 there means ambiguous."""

    matches: tuple[str, ...]
    ambiguous: bool
    trace: tuple[str, ...]
    hint: str | None = None
    best: tuple[str, ...] = ()

    @property
    def resolved(self) -> bool:
        return bool(self.matches)

    @classmethod
    def from_ranked(cls, ranked: dict[str, Rank], trace: Iterable[str]) -> GroundingResult:
        ordered = sorted(ranked.items(), key=lambda kv: (kv[1], sort_key(kv[0])))
        if not ordered:
            return cls.unresolvable(NO_MATCH_HINT, trace)
        top = ordered[0][1]
        best = tuple(i for i, r in ordered if r == top)
        return cls(
            matches=tuple(i for i, _ in ordered),
            ambiguous=len(best) > 1,
            trace=tuple(trace),
            best=best,
        )

    @classmethod
    def unresolvable(cls, hint: str, trace: Iterable[str] = ()) -> GroundingResult:
        return cls(matches=(), ambiguous=False, trace=tuple(trace), hint=hint)


def in_band(obj: ObjectRecord, level: BandLevel, counter_height: float) -> bool:
    if level is BandLevel.HIGH:
        return obj.bbox.min[2] >= counter_height - BAND_EPS
    return obj.bbox.max[2] <= counter_height + BAND_EPS


def anchor_error(anchor: Query) -> UnresolvableError:
    return UnresolvableError(
        f"anchor {format_query(anchor)} matches nothing",
        hint="check the anchor's category and modifiers",
    )


def _reach(
    graph: NeighborGraph, anchors: Iterable[str], rel: Relation, ordinal: int
) -> dict[str, int]:
    """Ids reachable from any anchor, mapped to their chain position.

    A directional ordinal k keeps every chain position >= k, ranked by position,
    not only the k-th. NextTo with k = 1 keeps both edge lists; k > 1 keeps the
    k-th object of the left and right chains.
    """
    reached: dict[str, int] = {}
    for anchor in sorted(anchors, key=sort_key):
        if rel is Relation.NEXT_TO:
            if ordinal == 1:
                for b in graph.neighbors(anchor, Relation.NEXT_TO):
                    reached[b] = 1
                continue
            for side in LATERAL:
                path = graph.walk(anchor, side)
                if len(path) >= ordinal:
                    reached[path[ordinal - 1]] = ordinal
            continue
        for position, b in enumerate(graph.walk(anchor, rel), start=1):
            if position >= ordinal:
                reached[b] = min(reached.get(b, position), position)
    return reached


class _Resolver:
    def __init__(self, scene: SceneModel, graph: NeighborGraph):
        self.scene = scene
        self.graph = graph
        self.trace: list[str] = []

    def evaluate(self, query: Query, depth: int = 0) -> dict[str, Rank]:
        pad = "  " * depth
        survivors: dict[str, Rank] = {o.id: () for o in self.scene.objects}
        self.trace.append(f"{pad}{format_query(query)}: {len(survivors)} candidates")
        for constraint in query.constraints:
            survivors = self.apply(constraint, survivors, depth)
            self.trace.append(
                f"{pad}  {_describe(constraint)} -> {len(survivors)}: "
                + ", ".join(sorted(survivors, key=sort_key))
            )
        return survivors

    def apply(self, c: Constraint, survivors: dict[str, Rank], depth: int) -> dict[str, Rank]:
        get = self.scene.get
        match c:
            case Category(name):
                return {i: r for i, r in survivors.items() if get(i).category == name}
            case Band(level):
                h = self.scene.counter_height
                return {i: r for i, r in survivors.items() if in_band(get(i), level, h)}
            case Fact(key, value):
                return {i: r for i, r in survivors.items() if get(i).has_fact(key, value)}
            case StackPos(slot):
                return {i: r for i, r in survivors.items() if in_slot(self.scene, get(i), slot)}
            case Rel(relation, anchor, ordinal):
                anchors = self.evaluate(anchor, depth + 1)
                if not anchors:
                    raise anchor_error(anchor)
                reached = _reach(self.graph, anchors, relation, ordinal)
                return {i: r + (reached[i],) for i, r in survivors.items() if i in reached}
        raise TypeError(f"not a constraint: {c!r}")


def _describe(c: Constraint) -> str:
    match c:
        case Category(name):
            return f"category {name}"
        case Band(level):
            return f"band {level.value}"
        case Fact(key, value):
            return f"fact {key}={value}"
        case StackPos(slot):
            return f"stack {slot if isinstance(slot, int) else slot.value}"
        case Rel(relation, _, ordinal):
            return f"rel {relation.value} ordinal {ordinal}"
    return repr(c)


def resolve(expr: Query, scene: SceneModel, graph: NeighborGraph) -> GroundingResult:
    """Run a query's filters over the scene, using the graph for relations.

    Raises:
        UnresolvableError: a relation's anchor matches no object
        UnknownIdError: the graph names an object missing from the scene
    """
    missing = [i for i in graph.ids if i not in scene]
    if missing:
        raise UnknownIdError(f"graph ids not in scene: {', '.join(missing)}")
    resolver = _Resolver(scene, graph)
    ranked = resolver.evaluate(expr)
    result = GroundingResult.from_ranked(ranked, resolver.trace)
    if result.ambiguous:
        logger.info("ambiguous grounding for %s: %s", format_query(expr), ", ".join(result.best))
    return result
