"""Viewpoint frame geometry shared by the graph builder and the brute-force oracle."""
from __future__ import annotations

import numpy as np

from ..errors import SceneError
from ..world import ObjectRecord, Viewpoint
from .relation import Relation

UP = np.array([0.0, 0.0, 1.0])
# dominance margin and distance rounding; keeps ties stable across float noise
EPS = 1e-9
DIST_DECIMALS = 9


def distance(a: ObjectRecord, b: ObjectRecord) -> float:
    d = np.asarray(b.position, dtype=float) - np.asarray(a.position, dtype=float)
    return round(float(np.sqrt(d @ d)), DIST_DECIMALS)


class Frame:
    """Observer-relative axes: left/right across the view, up/down, depth along it."""

    def __init__(self, viewpoint: Viewpoint):
        facing = np.asarray(viewpoint.facing, dtype=float)
        facing = facing - (facing @ UP) * UP
        norm = np.linalg.norm(facing)
        if norm < EPS:
            raise SceneError(f"viewpoint {viewpoint.name!r} must face a horizontal direction")
        self.name = viewpoint.name
        self.facing = facing / norm
        self.right = np.cross(self.facing, UP)
        self.left = -self.right
        self.up = UP

    def direction(self, rel: Relation) -> np.ndarray:
        return {
            Relation.LEFT: self.left,
            Relation.RIGHT: self.right,
            Relation.ABOVE: self.up,
            Relation.BELOW: -self.up,
        }[rel]

    def components(self, a: ObjectRecord, b: ObjectRecord) -> tuple[float, float, float]:
        """(lateral, depth, vertical) of the displacement a -> b; lateral > 0 is leftward."""
        d = np.asarray(b.position, dtype=float) - np.asarray(a.position, dtype=float)
        return float(d @ self.left), float(d @ self.facing), float(d @ self.up)

    def relation(self, a: ObjectRecord, b: ObjectRecord) -> Relation | None:
        """Which way b lies from a, or None when no axis strictly dominates."""
        lat, dep, vert = self.components(a, b)
        al, ad, av = abs(lat), abs(dep), abs(vert)
        if al > ad + EPS and al > av + EPS:
            return Relation.LEFT if lat > 0 else Relation.RIGHT
        if av > ad + EPS and av > al + EPS:
            return Relation.ABOVE if vert > 0 else Relation.BELOW
        return None

    def signed_axis(self, rel: Relation) -> str:
        """Dominant world axis of a relation's direction, e.g. "+x"."""
        vec = self.direction(rel)
        i = int(np.argmax(np.abs(vec)))
        return ("+" if vec[i] > 0 else "-") + "xyz"[i]


def rotated_viewpoint(viewpoint: Viewpoint, degrees: float, name: str | None = None) -> Viewpoint:
    """The same observer turned about the vertical axis."""
    theta = np.deg2rad(degrees)
    rot = np.array(
        [[np.cos(theta), -np.sin(theta), 0.0], [np.sin(theta), np.cos(theta), 0.0], [0, 0, 1.0]]
    )
    facing = rot @ np.asarray(viewpoint.facing, dtype=float)
    return Viewpoint(
        name=name or f"{viewpoint.name}+{degrees:g}",
        position=viewpoint.position,
        facing=tuple(float(round(c, 12)) for c in facing),
    )
