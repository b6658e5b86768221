"""Evaluation of grounding prompt variants against the gold expressions."""
from .difficulty import DifficultyModel, difficulty, load_difficulty
from .gold import GoldEntry, GoldSet, load_gold
from .harness import Prediction, Score, VariantResult, run_variant, run_variants, score
from .report import ReportDocs, build_summary, emit_report

__all__ = [
    "DifficultyModel",
    "GoldEntry",
    "GoldSet",
    "Prediction",
    "ReportDocs",
    "Score",
    "VariantResult",
    "build_summary",
    "difficulty",
    "emit_report",
    "load_difficulty",
    "load_gold",
    "run_variant",
    "run_variants",
    "score",
]
