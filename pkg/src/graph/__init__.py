"""Symbolic spatial adjacency derived from scene geometry."""
from .frame import Frame, distance, rotated_viewpoint
from .neighbors import Neighbor, NeighborGraph, build_graph, chain_walk
from .relation import DIRECTIONAL, LATERAL, Relation
from .render import GraphEncoding, render_graph

__all__ = [
    "DIRECTIONAL",
    "LATERAL",
    "Frame",
    "GraphEncoding",
    "Neighbor",
    "NeighborGraph",
    "Relation",
    "build_graph",
    "chain_walk",
    "distance",
    "render_graph",
    "rotated_viewpoint",
]
