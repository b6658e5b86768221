"""World model: loading, lookup, id styles and category lists."""
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import box_scene
from src.errors import AnonymizationError, SceneError, UnknownIdError, UnknownViewpointError
from src.world import (
    IdStyle,
    anonymize,
    anonymous_id,
    deanonymize,
    dump_scene,
    load_scene,
    render_category_list,
    sort_key,
)


def _doc(**overrides):
    doc = {
        "viewpoints": [{"name": "Front", "position": [0, 5, 1], "facing": [0, -1, 0]}],
        "objects": [
            {
                "id": "Cabinet1",
                "category": "Cabinet",
                "position": [0, 0, 1],
                "bbox": {"min": [-0.5, -0.5, 0.5], "max": [0.5, 0.5, 1.5]},
            }
        ],
    }
    doc.update(overrides)
    return doc


def test_kitchen_fixture_loads(kitchen):
    assert len(kitchen) == 24
    assert [vp.name for vp in kitchen.viewpoints] == ["South", "West"]
    assert kitchen.get("Microwave43").category == "Microwave"
    assert "CounterTop19a" in kitchen
    assert kitchen.viewpoint().name == "South"


def test_facts_accept_single_values_and_lists():
    doc = _doc()
    doc["objects"][0]["facts"] = {"contains": ["knives", "forks"], "function": "silverware"}
    obj = load_scene(doc).get("Cabinet1")
    assert obj.has_fact("contains", "knives")
    assert obj.has_fact("contains", "forks")
    assert obj.has_fact("function", "silverware")
    assert not obj.has_fact("contains", "spoons")


def test_duplicate_ids_rejected():
    doc = _doc()
    doc["objects"] = doc["objects"] * 2
    with pytest.raises(SceneError, match="duplicate"):
        load_scene(doc)


def test_scene_needs_a_viewpoint():
    with pytest.raises(SceneError, match="viewpoint"):
        load_scene(_doc(viewpoints=[]))


def test_position_must_lie_in_bbox():
    doc = _doc()
    doc["objects"][0]["position"] = [3, 0, 1]
    with pytest.raises(SceneError, match="outside its bbox"):
        load_scene(doc)


def test_empty_category_rejected():
    doc = _doc()
    doc["objects"][0]["category"] = ""
    with pytest.raises(SceneError):
        load_scene(doc)


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(SceneError, match="not found"):
        load_scene(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(SceneError, match="not valid JSON"):
        load_scene(bad)


def test_lookup_errors(kitchen):
    with pytest.raises(UnknownIdError):
        kitchen.get("Cabinet99")
    with pytest.raises(UnknownViewpointError, match="South, West"):
        kitchen.viewpoint("North")


def test_sort_key_orders_numeric_then_letter_suffix():
    ids = ["Drawer23", "CounterTop19a", "CounterTop17", "Stove78", "Cabinet7"]
    assert sorted(ids, key=sort_key) == [
        "Cabinet7",
        "CounterTop17",
        "CounterTop19a",
        "Drawer23",
        "Stove78",
    ]


def test_anonymize_keeps_suffix(kitchen):
    renamed, mapping = anonymize(kitchen)
    assert mapping["Cabinet14"] == "Object14"
    assert mapping["CounterTop19a"] == "Object19a"
    assert "Object43" in renamed
    assert renamed.get("Object43").category == "Microwave"
    assert deanonymize(["Object14", "Object19a", "Window1"], mapping) == [
        "Cabinet14",
        "CounterTop19a",
        "Window1",
    ]


def test_anonymize_collisions_and_missing_suffix():
    clash = box_scene(
        [
            {"id": "Cabinet7", "category": "Cabinet", "position": (0, 0, 1)},
            {"id": "Drawer7", "category": "Drawer", "position": (1, 0, 1)},
        ]
    )
    with pytest.raises(AnonymizationError, match="Object7"):
        anonymize(clash)
    with pytest.raises(AnonymizationError):
        anonymous_id("Sink")


def test_category_lists(kitchen):
    meaningful = render_category_list(kitchen, IdStyle.MEANINGFUL).splitlines()
    anonymized = render_category_list(kitchen, IdStyle.ANONYMIZED).splitlines()
    assert meaningful[0] == "Cabinet7 : category Cabinet"
    assert "Microwave43 : category Microwave" in meaningful
    assert meaningful[-1] == "Stove78 : category Stove"
    assert anonymized[0] == "Object7: category Cabinet"
    assert len(meaningful) == len(anonymized) == 24


def test_dump_is_plain_json(kitchen):
    doc = dump_scene(kitchen)
    assert load_scene(json.loads(json.dumps(doc))) == kitchen


_objects = st.lists(
    st.tuples(
        st.sampled_from(["Cabinet", "Drawer", "Shelf"]),
        st.tuples(*[st.integers(-5, 5)] * 3),
        st.dictionaries(
            st.sampled_from(["contains", "function"]),
            st.one_of(st.sampled_from(["knives", "spices"]), st.just(["forks", "spoons"])),
            max_size=2,
        ),
    ),
    max_size=12,
)


@pytest.mark.property_based
@given(_objects)
@settings(max_examples=100)
def test_load_dump_load_is_identity(objects):
    scene = box_scene(
        [
            {"id": f"{cat}{i}", "category": cat, "position": pos, "facts": facts}
            for i, (cat, pos, facts) in enumerate(objects, start=1)
        ]
    )
    assert load_scene(dump_scene(scene)) == scene
