"""Exhaustive reference evaluator.

Recomputes every relation from raw geometry with plain loops, never touching a
prebuilt graph. Slow (cubic in the object count) and only meant for tests and
``groundkit ground --check``.
"""
from __future__ import annotations

from ..graph import Frame, Relation, distance
from ..world import ObjectRecord, SceneModel, sort_key
from .dsl import Band, BandLevel, Category, Fact, Query, Rel, StackPos, StackSlot
from .resolver import BAND_EPS, GroundingResult, Rank, anchor_error


class _Oracle:
    def __init__(self, scene: SceneModel, viewpoint: str | None):
        self.scene = scene
        self.frame = Frame(scene.viewpoint(viewpoint))

    def candidates(self, a: ObjectRecord, rel: Relation) -> list[ObjectRecord]:
        return [b for b in self.scene.objects if b.id != a.id and self.frame.relation(a, b) is rel]

    def tied_nearest(self, a: ObjectRecord, rel: Relation) -> list[str]:
        found = self.candidates(a, rel)
        if not found:
            return []
        best = min(distance(a, b) for b in found)
        return [b.id for b in found if distance(a, b) == best]

    def edge(self, a: ObjectRecord, b: ObjectRecord, rel: Relation) -> bool:
        return b.id in self.tied_nearest(a, rel) or a.id in self.tied_nearest(b, rel.inverse)

    def step(self, a: ObjectRecord, rel: Relation) -> ObjectRecord | None:
        linked = [b for b in self.scene.objects if b.id != a.id and self.edge(a, b, rel)]
        if not linked:
            return None
        return min(linked, key=lambda b: (distance(a, b), b.id))

    def chain(self, a: ObjectRecord, rel: Relation) -> list[str]:
        path: list[str] = []
        current = a
        for _ in range(len(self.scene.objects)):
            current = self.step(current, rel)
            if current is None:
                break
            path.append(current.id)
        return path

    def stack_index(self, obj: ObjectRecord) -> tuple[int, int]:
        stack = []
        for o in self.scene.objects:
            if o.category != obj.category:
                continue
            if o.id == obj.id:
                stack.append(o)
                continue
            lo, hi = o.bbox, obj.bbox
            if all(lo.min[i] < hi.max[i] and hi.min[i] < lo.max[i] for i in (0, 1)):
                stack.append(o)
        stack.sort(key=lambda o: (-o.position[2], sort_key(o.id)))
        ids = [o.id for o in stack]
        return ids.index(obj.id), len(ids)

    def slot_ok(self, obj: ObjectRecord, slot: StackSlot | int) -> bool:
        index, size = self.stack_index(obj)
        if isinstance(slot, int):
            return index == slot - 1
        if slot is StackSlot.TOP:
            return index == 0
        if slot is StackSlot.BOTTOM:
            return index == size - 1
        if size < 3:
            return False
        if size % 2 == 1:
            return index == size // 2
        return index in (size // 2 - 1, size // 2)

    def position(
        self, obj: ObjectRecord, rel: Relation, ordinal: int, anchors: list[str]
    ) -> int | None:
        best = None
        for anchor_id in anchors:
            anchor = self.scene.get(anchor_id)
            if rel is Relation.NEXT_TO:
                if ordinal == 1:
                    if any(self.edge(anchor, obj, s) for s in (Relation.LEFT, Relation.RIGHT)):
                        best = 1
                    continue
                for side in (Relation.LEFT, Relation.RIGHT):
                    path = self.chain(anchor, side)
                    if len(path) >= ordinal and path[ordinal - 1] == obj.id:
                        best = ordinal
                continue
            path = self.chain(anchor, rel)
            for pos, other in enumerate(path, start=1):
                if other == obj.id and pos >= ordinal and (best is None or pos < best):
                    best = pos
        return best

    def evaluate(self, query: Query) -> dict[str, Rank]:
        out: dict[str, Rank] = {}
        anchor_sets = {}
        for c in query.constraints:
            if isinstance(c, Rel):
                anchors = self.evaluate(c.anchor)
                if not anchors:
                    raise anchor_error(c.anchor)
                anchor_sets[id(c)] = sorted(anchors)
        for obj in self.scene.objects:
            rank: list[int] = []
            keep = True
            for c in query.constraints:
                if isinstance(c, Category):
                    keep = obj.category == c.name
                elif isinstance(c, Band):
                    h = self.scene.counter_height
                    if c.level is BandLevel.HIGH:
                        keep = obj.bbox.min[2] >= h - BAND_EPS
                    else:
                        keep = obj.bbox.max[2] <= h + BAND_EPS
                elif isinstance(c, Fact):
                    keep = (c.key, c.value) in obj.facts
                elif isinstance(c, StackPos):
                    keep = self.slot_ok(obj, c.slot)
                elif isinstance(c, Rel):
                    pos = self.position(obj, c.relation, c.ordinal, anchor_sets[id(c)])
                    keep = pos is not None
                    if keep:
                        rank.append(pos)
                if not keep:
                    break
            if keep:
                out[obj.id] = tuple(rank)
        return out


def brute_oracle(expr: Query, scene: SceneModel, viewpoint: str | None = None) -> GroundingResult:
    """Evaluate ``expr`` by exhaustive search; agrees with ``resolve`` on every scene.

    Raises:
        UnresolvableError: a relation's anchor matches no object
    """
    oracle = _Oracle(scene, viewpoint)
    return GroundingResult.from_ranked(oracle.evaluate(expr), ["exhaustive evaluation"])
