"""Directional relations between neighbouring objects."""
from __future__ import annotations

from enum import Enum


class Relation(Enum):
    LEFT = "left"
    RIGHT = "right"
    ABOVE = "above"
    BELOW = "below"
    NEXT_TO = "next-to"  # derived: Left ∪ Right

    @property
    def inverse(self) -> Relation:
        return _INVERSE[self]

    @property
    def is_directional(self) -> bool:
        return self is not Relation.NEXT_TO


_INVERSE = {
    Relation.LEFT: Relation.RIGHT,
    Relation.RIGHT: Relation.LEFT,
    Relation.ABOVE: Relation.BELOW,
    Relation.BELOW: Relation.ABOVE,
    Relation.NEXT_TO: Relation.NEXT_TO,
}

# stored edge kinds, also the tie-break order for rendered keys
DIRECTIONAL = (Relation.LEFT, Relation.RIGHT, Relation.ABOVE, Relation.BELOW)
LATERAL = (Relation.LEFT, Relation.RIGHT)
