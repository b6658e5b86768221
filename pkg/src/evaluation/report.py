"""CSV and JSON reports for an evaluation run."""
from __future__ import annotations

import csv
import io
import json
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from .difficulty import DifficultyModel, load_difficulty
from .gold import GoldSet
from .harness import VariantResult, score

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "re_id",
    "variant",
    "predicted",
    "correct",
    "hit",
    "multi_match",
    "difficulty",
    "predicted_failure",
)


@dataclass(frozen=True)
class ReportDocs:
    csv_text: str
    summary: dict
    csv_path: Path | None = None
    summary_path: Path | None = None


def _rows(results: Sequence[VariantResult], gold: GoldSet, model: DifficultyModel) -> list[dict]:
    by_label = {r.label: {p.re_id: p for p in r.predictions} for r in results}
    labels = sorted(by_label)
    rows = []
    for entry in gold.entries:
        for label in labels:
            p = by_label[label].get(entry.re_id)
            predicted = p.predicted if p else ()
            total = model.total(entry.re_id, label)
            rows.append(
                {
                    "re_id": entry.re_id,
                    "variant": label,
                    "predicted": ";".join(predicted),
                    "correct": entry.correct,
                    "hit": int(bool(p and p.hit)),
                    "multi_match": int(bool(p and p.multi)),
                    "difficulty": total,
                    "predicted_failure": int(total >= model.threshold),
                }
            )
    return rows


def build_summary(
    results: Sequence[VariantResult], gold: GoldSet, model: DifficultyModel
) -> dict:
    variants = {}
    misses_total = misses_flagged = 0
    for result in sorted(results, key=lambda r: r.label):
        s = score(result, gold)
        variants[result.label] = {
            "hits": s.hits,
            "total": s.total,
            "accuracy": round(s.accuracy, 4),
            "complete": result.complete,
            "expected_hits": gold.expected_hits.get(result.label),
            "error": result.error,
        }
        for re_id, hit in s.per_re.items():
            if not hit:
                misses_total += 1
                misses_flagged += model.predicts_failure(re_id, result.label)
    return {
        "variants": variants,
        "threshold": {
            "value": model.threshold,
            "misses": misses_total,
            "misses_at_or_above": misses_flagged,
        },
    }


def emit_report(
    results: Sequence[VariantResult],
    gold: GoldSet,
    out_dir: Path | None = None,
    model: DifficultyModel | None = None,
) -> ReportDocs:
    """Render report.csv (expression-major, then variant) and summary.json.

    Files are written only when ``out_dir`` is given.

    Raises:
        ValueError: no variant results
        OSError: the output directory is not writable
    """
    if not results:
        raise ValueError("no variant results to report")
    model = model or load_difficulty()
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(_rows(results, gold, model))
    summary = build_summary(results, gold, model)
    if out_dir is None:
        return ReportDocs(csv_text=buf.getvalue(), summary=summary)

    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path, summary_path = out_dir / "report.csv", out_dir / "summary.json"
    csv_path.write_text(buf.getvalue(), encoding="utf-8")
    summary_path.write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    logger.info("wrote %s and %s", csv_path, summary_path)
    return ReportDocs(buf.getvalue(), summary, csv_path, summary_path)
