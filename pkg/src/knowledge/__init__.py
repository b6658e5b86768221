"""Situational knowledge and the verification loop for LLM-suggested facts."""
from .facts import STORAGE_KEY, Assertion, FactStore, Provenance
from .verify import (
    NEEDS_HUMAN_HINT,
    Verdict,
    VerdictKind,
    commit_fact,
    matches_locations,
    resolve_functional,
    verify_suggestion,
    with_store_facts,
)

__all__ = [
    "NEEDS_HUMAN_HINT",
    "STORAGE_KEY",
    "Assertion",
    "FactStore",
    "Provenance",
    "Verdict",
    "VerdictKind",
    "commit_fact",
    "matches_locations",
    "resolve_functional",
    "verify_suggestion",
    "with_store_facts",
]
