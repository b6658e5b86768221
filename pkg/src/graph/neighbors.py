"""Neighbour graph: nearest directional neighbours of every object in one viewpoint."""
from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ..errors import ChainError
from ..world import SceneModel
from .frame import DIST_DECIMALS, EPS, Frame
from .relation import DIRECTIONAL, LATERAL, Relation

logger = logging.getLogger(__name__)


class Neighbor(NamedTuple):
    id: str
    distance: float


@dataclass(frozen=True)
class NeighborGraph:
    """Edges per object id; each list is sorted nearest first, ties by id.

    ``X -> LEFT -> [Y]`` reads "Y is to the left of X".
    """

    viewpoint: str
    edges: Mapping[str, Mapping[Relation, tuple[Neighbor, ...]]]
    frame: Frame = field(compare=False, repr=False)
    ties: frozenset[tuple[str, Relation]] = frozenset()

    @property
    def ids(self) -> list[str]:
        return list(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def entries(self, object_id: str, rel: Relation) -> tuple[Neighbor, ...]:
        if rel is Relation.NEXT_TO:
            merged = {n.id: n for r in LATERAL for n in self.edges[object_id][r]}
            return tuple(sorted(merged.values(), key=lambda n: (n.distance, n.id)))
        return self.edges[object_id][rel]

    def neighbors(self, object_id: str, rel: Relation) -> list[str]:
        return [n.id for n in self.entries(object_id, rel)]

    def next_to(self, object_id: str) -> list[str]:
        return self.neighbors(object_id, Relation.NEXT_TO)

    def nearest(self, object_id: str, rel: Relation) -> str | None:
        found = self.edges[object_id][rel]
        return found[0].id if found else None

    def walk(self, start: str, rel: Relation, limit: int | None = None) -> list[str]:
        """Ids met by repeatedly stepping to the nearest ``rel`` neighbour (start excluded)."""
        if not rel.is_directional:
            raise ValueError("next-to has no single chain direction")
        limit = len(self.edges) if limit is None else limit
        path: list[str] = []
        current = start
        # each step moves strictly further along one axis, so the walk cannot revisit
        while len(path) < limit:
            nxt = self.nearest(current, rel)
            if nxt is None:
                break
            path.append(nxt)
            current = nxt
        return path


def build_graph(scene: SceneModel, viewpoint: str | None = None) -> NeighborGraph:
    """Compute nearest directional neighbours in a viewpoint's frame.

    Args:
        scene: the world model
        viewpoint: viewpoint name; the scene's first viewpoint when omitted

    Returns:
        NeighborGraph whose Left/Right and Above/Below lists are mutually inverse

    Raises:
        UnknownViewpointError: viewpoint not defined in the scene
    """
    vp = scene.viewpoint(viewpoint)
    frame = Frame(vp)
    objects = scene.objects
    ids = [o.id for o in objects]
    n = len(objects)
    edges: dict[str, dict[Relation, tuple[Neighbor, ...]]] = {
        i: {r: () for r in DIRECTIONAL} for i in ids
    }
    if n == 0:
        return NeighborGraph(viewpoint=vp.name, edges=edges, frame=frame)

    pos = np.array([o.position for o in objects], dtype=float)
    disp = pos[np.newaxis, :, :] - pos[:, np.newaxis, :]  # disp[i, j] = pos[j] - pos[i]
    lat, dep, vert = disp @ frame.left, disp @ frame.facing, disp @ frame.up
    al, ad, av = np.abs(lat), np.abs(dep), np.abs(vert)
    lateral = (al > ad + EPS) & (al > av + EPS)
    vertical = (av > ad + EPS) & (av > al + EPS)
    masks = {
        Relation.LEFT: lateral & (lat > 0),
        Relation.RIGHT: lateral & (lat < 0),
        Relation.ABOVE: vertical & (vert > 0),
        Relation.BELOW: vertical & (vert < 0),
    }
    dist = np.sqrt(np.einsum("ijk,ijk->ij", disp, disp))

    def d(i: int, j: int) -> float:
        return round(float(dist[i, j]), DIST_DECIMALS)

    nearest: dict[tuple[int, Relation], list[int]] = {}
    ties: set[tuple[str, Relation]] = set()
    for i in range(n):
        for rel, mask in masks.items():
            candidates = np.flatnonzero(mask[i])
            if candidates.size == 0:
                nearest[i, rel] = []
                continue
            best = min(d(i, j) for j in candidates)
            winners = sorted((int(j) for j in candidates if d(i, j) == best), key=ids.__getitem__)
            if len(winners) > 1:
                ties.add((ids[i], rel))
                logger.debug("%s: %s neighbours tied at %.3f m: %s", ids[i], rel.value, best,
                             ", ".join(ids[j] for j in winners))
            nearest[i, rel] = winners

    for i in range(n):
        for rel in DIRECTIONAL:
            members = set(nearest[i, rel])
            members.update(j for j in range(n) if i in nearest[j, rel.inverse])
            ordered = sorted(members, key=lambda j: (d(i, j), ids[j]))
            edges[ids[i]][rel] = tuple(Neighbor(ids[j], d(i, j)) for j in ordered)

    return NeighborGraph(viewpoint=vp.name, edges=edges, frame=frame, ties=frozenset(ties))


def chain_walk(graph: NeighborGraph, start: str, rel: Relation, k: int) -> str:
    """Follow the nearest ``rel`` edge k times from ``start``.

    Raises:
        ValueError: negative k
        ChainError: the chain ends before k steps
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return start
    path = graph.walk(start, rel, limit=k)
    if len(path) < k:
        raise ChainError(f"{rel.value} chain from {start} has only {len(path)} step(s), need {k}")
    return path[-1]
