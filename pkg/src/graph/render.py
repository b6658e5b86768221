"""Text encodings of a neighbour graph for prompts."""
from __future__ import annotations

from collections.abc import Callable
from enum import Enum
from functools import lru_cache
from pathlib import Path

import yaml

from ..world import sort_key
from .neighbors import NeighborGraph
from .relation import DIRECTIONAL, Relation

CARDINAL_TABLE = Path(__file__).with_name("cardinal.yaml")


class GraphEncoding(Enum):
    LANGUAGE = "language"
    SIGNED_AXIS = "signed-axis"
    CARDINAL_JSON = "cardinal-json"


@lru_cache(maxsize=4)
def load_cardinal_table(path: Path = CARDINAL_TABLE) -> tuple[dict[str, str], tuple[str, ...]]:
    data = yaml.safe_load(path.read_text(encoding="utf-8"))
    return dict(data["axes"]), tuple(data["order"])


def _ordered_relations(graph: NeighborGraph, object_id: str) -> list[Relation]:
    """Relations that have neighbours, nearest first; ties keep DIRECTIONAL order."""
    present = [r for r in DIRECTIONAL if graph.edges[object_id][r]]
    return sorted(present, key=lambda r: graph.edges[object_id][r][0].distance)


def _line_key(graph: NeighborGraph, rel: Relation, encoding: GraphEncoding) -> str:
    if encoding is GraphEncoding.LANGUAGE:
        return rel.value
    return graph.frame.signed_axis(rel)


def render_graph(
    graph: NeighborGraph,
    encoding: GraphEncoding,
    rename: Callable[[str], str] | None = None,
) -> str:
    """Render one line (or JSON entry) per object that has at least one neighbour.

    Args:
        graph: built neighbour graph
        encoding: Language, SignedAxis or CardinalJson
        rename: optional id mapping applied to every printed id (anonymised prompts)
    """
    rename = rename or (lambda i: i)
    ids = sorted(graph.ids, key=sort_key)

    if encoding is GraphEncoding.CARDINAL_JSON:
        axes, order = load_cardinal_table()
        entries = []
        for object_id in ids:
            by_letter = {
                axes[graph.frame.signed_axis(r)]: graph.neighbors(object_id, r)
                for r in DIRECTIONAL
                if graph.edges[object_id][r]
            }
            if not by_letter:
                continue
            parts = [
                f'"{letter}":[' + ",".join(f'"{rename(i)}"' for i in by_letter[letter]) + "]"
                for letter in order
                if letter in by_letter
            ]
            entries.append(f'"{rename(object_id)}":{{ ' + ", ".join(parts) + " }")
        return "{\n" + ",\n".join(entries) + ("\n" if entries else "") + "}"

    lines = []
    for object_id in ids:
        rels = _ordered_relations(graph, object_id)
        if not rels:
            continue
        parts = [
            f"{_line_key(graph, r, encoding)}= "
            + " and ".join(rename(i) for i in graph.neighbors(object_id, r))
            for r in rels
        ]
        lines.append(f"{rename(object_id)} ({', '.join(parts)})")
    return "\n".join(lines)
