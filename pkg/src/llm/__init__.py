"""Prompt construction, completion clients and response parsing."""
from .client import CompletionClient, LiveClient, ReplayClient, complete, read_transcript
from .parsing import (
    GroundingAnswer,
    StorageSuggestion,
    Unparsed,
    parse_grounding_response,
    parse_simplify_response,
    parse_storage_response,
)
from .prompts import (
    PromptDoc,
    PromptKind,
    build_grounding_prompt,
    build_simplify_prompt,
    build_storage_prompt,
    extract_recipe_steps,
    prompt_digest,
)
from .variants import PromptVariant, get_variant, load_variants

__all__ = [
    "CompletionClient",
    "GroundingAnswer",
    "LiveClient",
    "PromptDoc",
    "PromptKind",
    "PromptVariant",
    "ReplayClient",
    "StorageSuggestion",
    "Unparsed",
    "build_grounding_prompt",
    "build_simplify_prompt",
    "build_storage_prompt",
    "complete",
    "extract_recipe_steps",
    "get_variant",
    "load_variants",
    "parse_grounding_response",
    "parse_simplify_response",
    "parse_storage_response",
    "prompt_digest",
    "read_transcript",
]
