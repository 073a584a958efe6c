"""Estimator-style facade over the typing pipeline.

``TypingSimulator`` is a stateless transformer in the scikit-learn
sense: texts in, keystroke traces out, with every pace and editing rate
a flat constructor parameter so ``get_params``/``set_params`` (and grid
search, for whatever that's worth) work out of the box. Validation
happens in ``fit``, mirroring the usual estimator contract.
"""

from __future__ import annotations

import random
from dataclasses import fields
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from .errors import ValidationError
from .lexicon import Lexicon, load_lexicon
from .pipeline import derive_seed, synthesize_trace
from .planning import EditingParameters, validate_params
from .scheduling import EventTrace, TemporalParameters, validate_temporal

_TEMPORAL_KEYS = tuple(f.name for f in fields(TemporalParameters))
_EDITING_KEYS = tuple(f.name for f in fields(EditingParameters))

PARAM_KEYS = _TEMPORAL_KEYS + _EDITING_KEYS


def split_params(values: dict) -> tuple[TemporalParameters, EditingParameters]:
    """Build validated parameter bundles from a flat name -> value dict."""
    unknown = set(values) - set(PARAM_KEYS)
    if unknown:
        raise ValidationError(f"unknown parameters: {sorted(unknown)}")
    temporal = TemporalParameters(**{k: v for k, v in values.items() if k in _TEMPORAL_KEYS})
    editing = EditingParameters(**{k: v for k, v in values.items() if k in _EDITING_KEYS})
    validate_temporal(temporal)
    validate_params(editing)
    return temporal, editing


class TypingSimulator(BaseEstimator, TransformerMixin):
    """Transform finalized response texts into keystroke-event traces.

    Parameters mirror ``TemporalParameters`` and ``EditingParameters``
    field for field; ``random_state`` seeds the whole performance, so a
    fitted simulator maps equal inputs to byte-equal traces.
    """

    def __init__(
        self,
        char_pace_mean_ms: float = 80.0,
        char_pace_std_ms: float = 25.0,
        space_lag_mean_ms: float = 120.0,
        space_lag_std_ms: float = 40.0,
        deletion_pace_mean_ms: float = 60.0,
        deletion_pace_std_ms: float = 20.0,
        cursor_pace_mean_ms: float = 8.0,
        cursor_pace_std_ms: float = 2.0,
        pause_rate: float = 0.0,
        thinking_mean_s: float = 1.5,
        thinking_std_s: float = 0.5,
        paragraph_deletion_rate: float = 0.0,
        paragraph_insertion_rate: float = 0.0,
        paragraph_modification_rate: float = 0.0,
        sentence_deletion_rate: float = 0.0,
        sentence_insertion_rate: float = 0.0,
        sentence_modification_rate: float = 0.0,
        word_deletion_rate: float = 0.0,
        word_insertion_rate: float = 0.0,
        word_modification_rate: float = 0.0,
        char_typo_rate: float = 0.0,
        random_state: int | None = None,
        lexicon: Lexicon | None = None,
    ):
        self.char_pace_mean_ms = char_pace_mean_ms
        self.char_pace_std_ms = char_pace_std_ms
        self.space_lag_mean_ms = space_lag_mean_ms
        self.space_lag_std_ms = space_lag_std_ms
        self.deletion_pace_mean_ms = deletion_pace_mean_ms
        self.deletion_pace_std_ms = deletion_pace_std_ms
        self.cursor_pace_mean_ms = cursor_pace_mean_ms
        self.cursor_pace_std_ms = cursor_pace_std_ms
        self.pause_rate = pause_rate
        self.thinking_mean_s = thinking_mean_s
        self.thinking_std_s = thinking_std_s
        self.paragraph_deletion_rate = paragraph_deletion_rate
        self.paragraph_insertion_rate = paragraph_insertion_rate
        self.paragraph_modification_rate = paragraph_modification_rate
        self.sentence_deletion_rate = sentence_deletion_rate
        self.sentence_insertion_rate = sentence_insertion_rate
        self.sentence_modification_rate = sentence_modification_rate
        self.word_deletion_rate = word_deletion_rate
        self.word_insertion_rate = word_insertion_rate
        self.word_modification_rate = word_modification_rate
        self.char_typo_rate = char_typo_rate
        self.random_state = random_state
        self.lexicon = lexicon

    @classmethod
    def from_preset(cls, name: str, random_state: int | None = None, **overrides) -> "TypingSimulator":
        from .runtime import preset  # local import; runtime also imports us

        config = preset(name)
        values = {k: getattr(config.temporal, k) for k in _TEMPORAL_KEYS}
        values.update({k: getattr(config.editing, k) for k in _EDITING_KEYS})
        values.update(overrides)
        return cls(random_state=random_state, **values)

    def fit(self, X=None, y=None) -> "TypingSimulator":
        """Validate parameters and freeze the working configuration."""
        values = {k: getattr(self, k) for k in PARAM_KEYS}
        self.temporal_, self.editing_ = split_params(values)
        self.lexicon_ = self.lexicon if self.lexicon is not None else load_lexicon()
        if self.random_state is None:
            self.base_seed_ = random.randrange(2**63)
        else:
            self.base_seed_ = int(self.random_state)
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "temporal_"):
            raise ValidationError("simulator is not fitted; call fit() first")

    def transform(self, X: Iterable[str]) -> list[EventTrace]:
        """One trace per input text, independently seeded per position."""
        self._check_fitted()
        return [
            synthesize_trace(
                text,
                self.temporal_,
                self.editing_,
                self.lexicon_,
                derive_seed(self.base_seed_, index, "transform"),
            )
            for index, text in enumerate(X)
        ]

    def transform_text(self, text: str, seed: int | None = None) -> EventTrace:
        """Single-text convenience with an optional explicit seed."""
        self._check_fitted()
        if seed is None:
            seed = derive_seed(self.base_seed_, 0, "transform")
        return synthesize_trace(text, self.temporal_, self.editing_, self.lexicon_, seed)
