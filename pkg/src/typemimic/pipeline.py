"""Segment -> plan -> schedule, plus reproducible seed derivation."""

from __future__ import annotations

import hashlib

from .lexicon import Lexicon
from .planning import EditingParameters, plan_edits
from .scheduling import EventTrace, TemporalParameters, schedule
from .segmenter import segment


def derive_seed(base: int, index: int, label: str) -> int:
    """Stable sub-seed for stream ``label`` at position ``index``.

    Hash-based (not Python's salted ``hash``), so whole conversations
    replay from a single session seed across processes.
    """
    digest = hashlib.sha256(f"{base}:{index}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def synthesize_trace(
    text: str,
    temporal: TemporalParameters,
    editing: EditingParameters,
    lexicon: Lexicon,
    seed: int,
) -> EventTrace:
    """Full performance pipeline for one finalized response text."""
    structure = segment(text)
    plan = plan_edits(structure, editing, lexicon, derive_seed(seed, 0, "plan"))
    return schedule(plan, temporal, derive_seed(seed, 0, "schedule"), editing=editing)
