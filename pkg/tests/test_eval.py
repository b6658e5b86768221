"""Evaluation harness, difficulty model and reports over the recorded transcript."""
import json

import pytest

from src.evaluation import (
    Prediction,
    VariantResult,
    build_summary,
    difficulty,
    emit_report,
    load_difficulty,
    run_variant,
    run_variants,
    score,
)
from src.evaluation.harness import align_answers
from src.evaluation.report import CSV_COLUMNS
from src.llm import GroundingAnswer, ReplayClient, get_variant, load_variants

EXPECTED_HITS = {"A": 8, "B": 7, "C": 6, "D": 7, "E": 7, "F": 6, "G": 7, "H": 7}

# rows: expressions 1..10, columns: variants A..H
DIFFICULTY = [
    [8, 7, 10, 9, 9, 8, 11, 11],
    [9, 8, 11, 10, 10, 9, 12, 12],
    [8, 7, 10, 9, 9, 8, 11, 11],
    [7, 6, 9, 8, 8, 7, 10, 10],
    [11, 10, 13, 12, 12, 11, 14, 14],
    [9, 8, 11, 10, 10, 9, 12, 12],
    [6, 5, 8, 7, 7, 6, 9, 9],
    [11, 10, 13, 12, 12, 11, 14, 14],
    [9, 8, 11, 10, 10, 9, 12, 12],
    [9, 8, 11, 10, 10, 9, 12, 12],
]


@pytest.fixture
async def results(kitchen, replay_client, gold) -> list[VariantResult]:
    return await run_variants(list(load_variants().values()), kitchen, replay_client, gold)


def test_difficulty_cells():
    cells = [[difficulty(re_id, label) for label in "ABCDEFGH"] for re_id in range(1, 11)]
    assert cells == DIFFICULTY
    assert difficulty(5, "G") == 14
    assert difficulty(7, "B") == 5


def test_difficulty_rejects_unknown_cells():
    with pytest.raises(KeyError, match="'Z'"):
        difficulty(1, "Z")
    assert load_difficulty().predicts_failure(1, "C")
    assert not load_difficulty().predicts_failure(1, "A")


async def test_recorded_hits_per_variant(results, gold):
    assert [r.label for r in results] == list("ABCDEFGH")
    assert all(r.complete and r.error is None for r in results)
    hits = {r.label: score(r, gold).hits for r in results}
    assert hits == EXPECTED_HITS == gold.expected_hits


async def test_anonymized_answers_map_back_to_scene_ids(results, kitchen):
    for result in results:
        if result.label not in "GH":
            continue
        predicted = [i for p in result.predictions for i in p.predicted]
        assert predicted
        assert all(i in kitchen for i in predicted)
        assert not any(i.startswith("Object") for i in predicted)


async def test_threshold_explains_most_misses(results, gold):
    summary = build_summary(results, gold, load_difficulty())
    assert summary["threshold"] == {"value": 10, "misses": 25, "misses_at_or_above": 19}
    assert summary["variants"]["A"]["accuracy"] == 0.8
    assert summary["variants"]["C"]["expected_hits"] == 6


async def test_report_files(results, gold, tmp_path):
    docs = emit_report(results, gold, tmp_path / "out")
    lines = docs.csv_path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 81
    assert lines[0].split(",") == list(CSV_COLUMNS)
    assert [line.split(",")[:2] for line in lines[1:9]] == [["1", v] for v in "ABCDEFGH"]
    g5 = next(line.split(",") for line in lines if line.startswith("5,G,"))
    assert g5[-2:] == ["14", "1"]
    assert json.loads(docs.summary_path.read_text(encoding="utf-8")) == docs.summary


async def test_reports_are_deterministic(kitchen, replay_client, gold, results):
    again = await run_variants(list(load_variants().values()), kitchen, replay_client, gold)
    assert emit_report(again, gold).csv_text == emit_report(results, gold).csv_text


def test_report_without_results():
    with pytest.raises(ValueError, match="no variant results"):
        emit_report([], None)


async def test_missing_replay_entry_gives_an_incomplete_result(kitchen, gold, tmp_path):
    client = ReplayClient(tmp_path / "empty.transcript")
    result = await run_variant(get_variant("A"), kitchen, client, gold)
    assert not result.complete
    assert "A prompt" in result.error
    assert result.predictions == []
    assert score(result, gold).hits == 0

    docs = emit_report([result], gold)
    assert docs.summary["variants"]["A"]["complete"] is False
    assert docs.summary["threshold"]["misses"] == 10


def test_answers_are_aligned_by_text_when_counts_differ(gold):
    entries = [
        GroundingAnswer("The cabinet below the sink", ("Cabinet12",)),
        GroundingAnswer("The high cabinet to the left of the microwave!", ("Cabinet14",)),
    ]
    ids, complete = align_answers(entries, gold)
    assert not complete
    assert ids[0] == ("Cabinet14",)
    assert ids[6] == ("Cabinet12",)
    assert sum(1 for i in ids if i) == 2


def _prediction(entry, *ids: str) -> Prediction:
    return Prediction(re_id=entry.re_id, re_text=entry.text, predicted=ids, correct=entry.correct)


def test_score_ignores_order(gold):
    predictions = [_prediction(e, e.correct) for e in gold.entries]
    forward = score(VariantResult("A", predictions), gold)
    backward = score(VariantResult("A", predictions[::-1]), gold)
    assert forward == backward
    assert forward.hits == len(gold)

    first = gold.entries[0]
    assert _prediction(first, first.correct, "Nope1").multi
    assert not _prediction(first, first.correct, "Nope1").hit
    assert not _prediction(first, "Nope1", first.correct).hit
    assert _prediction(first, first.correct, first.correct).hit


def test_multi_object_answer_is_a_flagged_miss(gold):
    first = gold.entries[0]
    entries = [
        GroundingAnswer(e.text, (e.correct, "Nope1") if e is first else (e.correct,))
        for e in gold.entries
    ]
    ids, complete = align_answers(entries, gold)
    assert complete
    result = VariantResult(
        "A", [_prediction(e, *predicted) for e, predicted in zip(gold.entries, ids)]
    )

    s = score(result, gold)
    assert not s.per_re[first.re_id]
    assert s.hits == len(gold) - 1

    lines = emit_report([result], gold).csv_text.splitlines()
    header = lines[0].split(",")
    row = dict(zip(header, lines[1].split(",")))
    assert row["predicted"] == f"{first.correct};Nope1"
    assert (row["hit"], row["multi_match"]) == ("0", "1")
    others = [dict(zip(header, line.split(","))) for line in lines[2:]]
    assert all(r["multi_match"] == "0" and r["hit"] == "1" for r in others)
