"""Reading grounding, storage and simplification answers."""
from conftest import TRANSCRIPT
from src.llm import (
    GroundingAnswer,
    StorageSuggestion,
    Unparsed,
    parse_grounding_response,
    parse_simplify_response,
    parse_storage_response,
    read_transcript,
)


def _response(label: str) -> str:
    return next(r.response for r in read_transcript(TRANSCRIPT).values() if r.label == label)


def test_grounding_answers_in_order():
    entries = parse_grounding_response(_response("A"))
    assert len(entries) == 10
    assert all(isinstance(e, GroundingAnswer) for e in entries)
    assert entries[0] == GroundingAnswer("the high cabinet to the left of the microwave.",
                                         ("Cabinet14",))
    assert entries[4].ids == ("Drawer27",)


def test_dash_separated_answers():
    entries = parse_grounding_response(_response("C"))
    assert [e.ids[0] for e in entries][:2] == ["Cabinet15", "Cabinet7"]


def test_known_ids_filter_anonymized_tokens():
    known = {f"Object{n}" for n in (7, 8, 12, 13, 14, 23, 28, 29, 30, 31)}
    entries = parse_grounding_response(_response("G"), known_ids=known)
    assert [e.ids for e in entries][-1] == ("Object14",)


def test_bullets_multiple_ids_and_unparsed_lines():
    text = (
        "Sure:\n"
        "1. the cabinet below the sink: Cabinet12\n"
        "- the drawer next to the dishwasher → Drawer23, Drawer28 and Drawer23\n"
        "* the vase → I am not sure\n"
        "no separator on this line\n"
    )
    entries = parse_grounding_response(text)
    assert entries == [
        GroundingAnswer("the cabinet below the sink", ("Cabinet12",)),
        GroundingAnswer("the drawer next to the dishwasher", ("Drawer23", "Drawer28")),
        Unparsed("the vase → I am not sure", "no object id"),
    ]


def test_storage_response_suggestions():
    entries = parse_storage_response(_response("storage"))
    assert len(entries) == 12
    assert all(isinstance(e, StorageSuggestion) for e in entries)
    by_request = {e.re_text: e for e in entries}

    fork = by_request["a fork"]
    assert fork.objects == ("object39",)
    assert fork.locations == tuple(f"object{n}" for n in range(27, 36))
    assert fork.type_class == "Eating utensils"

    potatoes = by_request["potatoes"]
    assert potatoes.objects == ("object54", "object55")
    assert potatoes.locations == ("object40",)
    assert potatoes.type_class == "Perishable food items"

    vase = by_request["a vase"]
    assert vase.objects == ("object81", "object82")
    assert len(vase.locations) == 12
    assert vase.locations[:3] == ("object58", "object59", "object60")

    assert by_request["something to slice the bread"].objects == ("object44",)
    assert by_request["a sponge for washing dishes"].type_class == "Cleaning tools"


def test_storage_malformed_lines():
    text = (
        "Type 1: Dishes\n- the mug → object3\n"
        "- a cup → → object4\nthe plate → object5 → object7\n"
    )
    entries = parse_storage_response(text)
    assert [type(e) for e in entries] == [Unparsed, Unparsed, StorageSuggestion]
    assert entries[2].type_class == "Dishes"


def test_simplify_response_drops_chatter():
    commands = parse_simplify_response(
        "Sure! Here are the steps:\n\n" + _response("simplify") + "\nEnjoy your meal!"
    )
    assert len(commands) == 28
    assert str(commands[0]) == "Pick up eggs."
    assert commands[10].optional
    assert str(commands[-1]) == "Serve eggs."
