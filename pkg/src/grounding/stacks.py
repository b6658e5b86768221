"""Vertical stacks: same-category objects sharing a horizontal footprint."""
from __future__ import annotations

from ..world import ObjectRecord, SceneModel, sort_key
from .dsl import StackSlot


def stack_of(scene: SceneModel, obj: ObjectRecord) -> list[ObjectRecord]:
    """Objects stacked with ``obj`` (itself included), top first."""
    members = [
        o
        for o in scene.objects
        if o.category == obj.category and (o.id == obj.id or o.bbox.overlaps_xy(obj.bbox))
    ]
    return sorted(members, key=lambda o: (-o.position[2], sort_key(o.id)))


def slot_indices(slot: StackSlot | int, size: int) -> set[int]:
    """Indices (0 = top) selected by a stack position in a stack of ``size``."""
    if isinstance(slot, int):
        return {slot - 1} if slot <= size else set()
    if slot is StackSlot.TOP:
        return {0}
    if slot is StackSlot.BOTTOM:
        return {size - 1}
    if size < 3:
        return set()
    if size % 2:
        return {size // 2}
    return {size // 2 - 1, size // 2}


def in_slot(scene: SceneModel, obj: ObjectRecord, slot: StackSlot | int) -> bool:
    stack = stack_of(scene, obj)
    index = next(i for i, o in enumerate(stack) if o.id == obj.id)
    return index in slot_indices(slot, len(stack))
