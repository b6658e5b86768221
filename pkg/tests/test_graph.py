"""Neighbour graph construction, invariants and prompt encodings."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import box_scene, golden
from src.errors import ChainError, SceneError, UnknownViewpointError
from src.graph import (
    DIRECTIONAL,
    GraphEncoding,
    Relation,
    build_graph,
    chain_walk,
    render_graph,
    rotated_viewpoint,
)
from src.world import SceneModel, Viewpoint, anonymous_id

PUBLISHED_LINES = [
    "Microwave43 (left= Cabinet14, right= Cabinet15, below= Stove78)",
    "Cabinet15 (right= Cabinet8, left= Microwave43, below= CounterTop19a)",
    "Cabinet14 (right= Microwave43, left= Cabinet7, below= CounterTop17)",
    "Cabinet7 (below= CounterTop17, right= Cabinet14)",
]


def test_kitchen_nearest_neighbours(kitchen_graph):
    assert kitchen_graph.viewpoint == "South"
    assert kitchen_graph.nearest("Microwave43", Relation.LEFT) == "Cabinet14"
    assert kitchen_graph.neighbors("Microwave43", Relation.RIGHT) == ["Cabinet15"]
    assert kitchen_graph.next_to("Microwave43") == ["Cabinet14", "Cabinet15"]
    assert kitchen_graph.neighbors("Sink52", Relation.BELOW) == ["Cabinet12"]


def test_language_rendering_contains_published_lines(kitchen_graph):
    lines = render_graph(kitchen_graph, GraphEncoding.LANGUAGE).splitlines()
    for line in PUBLISHED_LINES:
        assert line in lines
    assert render_graph(kitchen_graph, GraphEncoding.LANGUAGE) in golden("grounding_A.txt")


def test_signed_axis_keys(kitchen_graph):
    frame = kitchen_graph.frame
    assert [frame.signed_axis(r) for r in DIRECTIONAL] == ["+x", "-x", "+z", "-z"]
    text = render_graph(kitchen_graph, GraphEncoding.SIGNED_AXIS)
    assert "Microwave43 (+x= Cabinet14, -x= Cabinet15, -z= Stove78)" in text.splitlines()


def test_cardinal_json_with_renaming(kitchen_graph):
    text = render_graph(kitchen_graph, GraphEncoding.CARDINAL_JSON, rename=anonymous_id)
    assert text.startswith("{\n") and text.endswith("\n}")
    assert '"Object14":{ "E":["Object7"], "W":["Object43"], "D":["Object17"] },' in text
    assert "Cabinet" not in text


def test_chain_walk(kitchen_graph):
    assert chain_walk(kitchen_graph, "Microwave43", Relation.LEFT, 0) == "Microwave43"
    assert chain_walk(kitchen_graph, "Microwave43", Relation.LEFT, 2) == "Cabinet7"
    with pytest.raises(ChainError):
        chain_walk(kitchen_graph, "Microwave43", Relation.LEFT, 3)
    with pytest.raises(ValueError):
        chain_walk(kitchen_graph, "Microwave43", Relation.LEFT, -1)
    with pytest.raises(ValueError):
        kitchen_graph.walk("Microwave43", Relation.NEXT_TO)


def test_unknown_viewpoint(kitchen):
    with pytest.raises(UnknownViewpointError):
        build_graph(kitchen, "North")


def test_vertical_viewpoint_rejected():
    scene = box_scene([{"id": "Cabinet1", "category": "Cabinet", "position": (0, 0, 0)}],
                      facing=(0, 0, -1))
    with pytest.raises(SceneError, match="horizontal"):
        build_graph(scene)


def test_isolated_objects_are_not_rendered():
    scene = box_scene([{"id": "Cabinet1", "category": "Cabinet", "position": (0, 0, 0)}])
    graph = build_graph(scene)
    assert len(graph) == 1
    assert render_graph(graph, GraphEncoding.LANGUAGE) == ""
    assert render_graph(graph, GraphEncoding.CARDINAL_JSON) == "{\n}"


def test_equidistant_neighbours_are_tied():
    scene = box_scene(
        [
            {"id": "Stove1", "category": "Stove", "position": (0, 0, 0)},
            {"id": "Drawer3", "category": "Drawer", "position": (1, 0, 0.5), "half": 0.1},
            {"id": "Drawer2", "category": "Drawer", "position": (1, 0, -0.5), "half": 0.1},
        ]
    )
    graph = build_graph(scene)
    assert graph.neighbors("Stove1", Relation.LEFT) == ["Drawer2", "Drawer3"]
    assert ("Stove1", Relation.LEFT) in graph.ties


# -- invariants over random scenes ------------------------------------------------

_grid = st.lists(
    st.tuples(
        st.sampled_from(["Cabinet", "Drawer", "Sink"]),
        st.tuples(st.integers(0, 4), st.integers(0, 1), st.integers(0, 3)),
    ),
    min_size=1,
    max_size=12,
)


def _scene(objects) -> SceneModel:
    return box_scene(
        [
            {"id": f"{cat}{i}", "category": cat, "position": pos}
            for i, (cat, pos) in enumerate(objects, start=1)
        ]
    )


@pytest.mark.property_based
@given(_grid)
@settings(max_examples=200)
def test_inverse_pairs_are_symmetric(objects):
    graph = build_graph(_scene(objects))
    for a in graph.ids:
        for rel in DIRECTIONAL:
            for b in graph.neighbors(a, rel):
                assert a in graph.neighbors(b, rel.inverse)
        for b in graph.next_to(a):
            assert a in graph.next_to(b)


@pytest.mark.property_based
@given(_grid)
@settings(max_examples=200)
def test_no_self_edges_and_sorted_lists(objects):
    graph = build_graph(_scene(objects))
    for a in graph.ids:
        for rel in (*DIRECTIONAL, Relation.NEXT_TO):
            entries = graph.entries(a, rel)
            assert a not in [n.id for n in entries]
            assert list(entries) == sorted(entries, key=lambda n: (n.distance, n.id))


@pytest.mark.property_based
@given(_grid)
@settings(max_examples=200)
def test_half_turn_swaps_left_and_right(objects):
    scene = _scene(objects)
    turned = SceneModel(
        objects=scene.objects,
        viewpoints=(rotated_viewpoint(scene.viewpoint(), 180, "Back"),),
    )
    front, back = build_graph(scene), build_graph(turned)
    assert back.viewpoint == "Back"
    for a in front.ids:
        assert back.neighbors(a, Relation.LEFT) == front.neighbors(a, Relation.RIGHT)
        assert back.neighbors(a, Relation.RIGHT) == front.neighbors(a, Relation.LEFT)
        assert back.neighbors(a, Relation.ABOVE) == front.neighbors(a, Relation.ABOVE)


def test_rotated_viewpoint_keeps_position():
    vp = Viewpoint(name="South", position=(1.0, 2.0, 1.5), facing=(0.0, -1.0, 0.0))
    west = rotated_viewpoint(vp, 90)
    assert west.name == "South+90"
    assert west.position == vp.position
    assert west.facing == (1.0, 0.0, 0.0)
