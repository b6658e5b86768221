"""Command language: parsing, printing, validation and simulated execution."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.cmdlang import (
    ActionCommand,
    KitchenState,
    execute,
    format_command,
    load_inventory,
    load_verbs,
    parse_command,
    parse_program,
    run_program,
    validate_program,
)
from src.config import FIXTURES, KitchenConfig
from src.errors import CommandSyntaxError, ProgramError

EGGS_PROGRAM = (FIXTURES / "scrambled.cmds").read_text(encoding="utf-8")


@pytest.fixture
def state() -> KitchenState:
    return KitchenState.initial(load_inventory(FIXTURES / "kitchen_inventory.yaml"))


def _run(text: str, state: KitchenState, **kwargs):
    return run_program(parse_program(text), state, **kwargs)


@pytest.mark.parametrize(
    "line, verb, args",
    [
        ("Pick up the eggs.", "PickUp", ("eggs",)),
        ("Put down salt in bowl.", "PutDownIn", ("salt", "bowl")),
        ("Put down fork on the counter.", "PutDownOn", ("fork", "counter")),
        ("Go to pan.", "GoTo", ("pan",)),
        ("Turn on stove.", "TurnOn", ("stove",)),
        ("Turn off stove.", "TurnOff", ("stove",)),
        ("Wait 5 minutes.", "WaitFor", ("5 minutes",)),
        ("Wait until eggs are cooked.", "WaitUntil", ("eggs are cooked",)),
        ("Stir eggs", "Stir", ("eggs",)),
        ("Pour eggs into pan.", "PourInto", ("eggs", "pan")),
        ("Crack eggs into a bowl.", "CrackInto", ("eggs", "bowl")),
        ("serve eggs.", "Serve", ("eggs",)),
    ],
)
def test_every_verb_parses(line, verb, args):
    cmd = parse_command(line)
    assert (cmd.verb, cmd.args, cmd.optional) == (verb, args, False)


def test_optional_prefix():
    cmd = parse_command("(Optional) Pour milk into bowl.")
    assert cmd == ActionCommand("PourInto", ("milk", "bowl"), optional=True)
    assert format_command(cmd) == "(Optional) Pour milk into bowl."


@pytest.mark.parametrize(
    "line, message",
    [
        ("", "empty command"),
        ("Fry the eggs.", "unknown verb"),
        ("Pour eggs.", "PourInto takes 2 arguments"),
        ("Put down the fork.", "PutDownIn or PutDownOn takes 2 arguments"),
        ("Pick up.", "empty argument"),
        ("Pour into pan.", "PourInto takes 2 arguments"),
    ],
)
def test_command_errors(line, message):
    with pytest.raises(CommandSyntaxError, match=message):
        parse_command(line)


def test_program_errors_name_the_line():
    with pytest.raises(CommandSyntaxError, match="line 3: "):
        parse_program("Pick up eggs.\n\nJuggle eggs.\n")


def test_eggs_program_parses_and_prints_back():
    commands = parse_program(EGGS_PROGRAM)
    assert len(commands) == 28
    assert [format_command(c) for c in commands] == EGGS_PROGRAM.splitlines()
    assert [i for i, c in enumerate(commands, start=1) if c.optional] == [11, 12]


_nouns = st.sampled_from(["eggs", "bowl", "pan", "salt", "butter knife", "stove"])


@pytest.mark.property_based
@given(st.sampled_from(load_verbs()), _nouns, _nouns, st.booleans())
@settings(max_examples=200)
def test_print_then_parse_is_identity(verb, first, second, optional):
    cmd = ActionCommand(verb.name, (first, second)[: verb.arity], optional)
    assert parse_command(format_command(cmd)) == cmd


# -- execution ----------------------------------------------------------------------


def test_eggs_program_cooks_and_serves_the_eggs(state):
    final, log = _run(EGGS_PROGRAM, state, skip_optional=True)
    assert len(log) == 26
    assert final.clock == 25
    assert final.summary() == ["eggs: cooked, served", "butter: melted", "pan: warm", "stove: off"]
    stirred = next(step for step in log if step.index == 25)
    assert str(stirred.command) == "Stir eggs."
    assert stirred.clock == 23
    assert final.items["eggs"].cooked


def test_eggs_program_with_optional_milk(state):
    final, log = _run(EGGS_PROGRAM, state)
    assert len(log) == 28
    assert final.clock == 27
    assert final.items["milk"].on == "pan"
    assert "eggs: cooked, served" in final.summary()


def test_failing_line_is_reported_with_the_log(state):
    with pytest.raises(ProgramError) as err:
        _run("Go to bowl.\nPick up fork.\nCrack eggs into bowl.\n", state)
    assert err.value.index == 3
    assert len(err.value.log) == 2
    assert "not holding eggs" in str(err.value)
    assert err.value.exit_code == 1


def test_execute_leaves_the_input_state_alone(state):
    after = execute(parse_command("Pick up eggs."), state)
    assert after.holding == "eggs" and after.clock == 1
    assert state.holding is None and state.clock == 0


@pytest.mark.parametrize(
    "program, message",
    [
        ("Pick up counter.", "cannot be picked up"),
        ("Pick up spoon.", "no 'spoon' in this kitchen"),
        ("Pick up eggs.\nPick up salt.", "already holding eggs"),
        ("Turn on stove.\nTurn on stove.", "already on"),
        ("Turn off stove.", "already off"),
        ("Serve eggs.", "not cooked yet"),
        ("Serve bowl.", "not a dish"),
        ("Stir eggs.", "not in a container"),
        ("Pick up salt.\nPut down salt in counter.", "not one of containers"),
        ("Pick up salt.\nCrack salt into bowl.", "cannot be cracked"),
        ("Pour milk into bowl.", "neither holding milk"),
    ],
)
def test_preconditions(state, program, message):
    with pytest.raises(ProgramError, match=message):
        _run(program, state)


def test_waits(state):
    final, _ = _run("Wait 3 minutes.\nWait 90 seconds.", state)
    assert final.clock == 5
    final, _ = _run("Wait a moment.", state)
    assert final.clock == 1
    final, _ = _run("Wait until the eggs are ready.", state)
    assert final.clock == 1


def test_wait_until_is_bounded():
    state = KitchenState.initial(
        load_inventory(FIXTURES / "kitchen_inventory.yaml"), KitchenConfig(max_wait_ticks=5)
    )
    with pytest.raises(ProgramError, match="after 5 ticks"):
        _run("Wait until pan is warm.", state)


def test_pouring_a_held_item_empties_the_hand(state):
    final, _ = _run("Pick up milk.\nPour milk into bowl.", state)
    assert final.holding is None
    assert final.contents("bowl") == ["milk"]


# -- validation ---------------------------------------------------------------------


def test_eggs_program_validates(kitchen):
    inventory = load_inventory(FIXTURES / "kitchen_inventory.yaml")
    commands = parse_program(EGGS_PROGRAM)
    for skip in (True, False):
        report = validate_program(commands, kitchen, inventory, skip_optional=skip)
        assert report.ok
        assert report.errors == [] and report.warnings == []


def test_scene_categories_and_aliases_are_known_nouns(kitchen):
    program = parse_program("Go to counter.\nTurn on oven.\nGo to fridge.")
    report = validate_program(program, kitchen)
    assert report.warnings == []


def test_validation_findings(kitchen):
    program = parse_program(
        "Pick up eggs.\n"
        "Pick up salt.\n"
        "Put down fork on counter.\n"
        "Pour eggs into pan.\n"
        "Wait until the sauce thickens.\n"
        "Wait a bit.\n"
        "Go to garage.\n"
    )
    report = validate_program(program, kitchen)
    assert not report.ok
    assert [i.index for i in report.errors] == [2, 3, 4]
    assert "while holding eggs" in report.errors[0].message
    warned = {i.index: i.message for i in report.warnings}
    assert "not simulated" in warned[5]
    assert "not understood" in warned[6]
    assert "unknown noun 'garage'" in warned[7]
    assert str(report.errors[1]).startswith("line 3: fork is not in hand")
