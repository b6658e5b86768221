"""groundkit - grounding referring expressions and kitchen commands against a labelled scene."""
