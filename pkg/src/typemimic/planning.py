"""Randomized edit plans: visible detours that resolve to the final text.

The response text is the ground truth, so every self-edit is staged as a
detour in the *initial* text (the text as first typed):

  - delete:  a filler word/sentence is planted, then removed
  - insert:  a real word/sentence is omitted at first, then typed in
  - modify:  a synonym (word level) or a typo (character level) is typed
             first, then corrected

Replaying a plan's actions over its initial text always reproduces the
final text byte-exactly; the planner asserts this before returning.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .errors import PlanIntegrityError, ValidationError
from .lexicon import Lexicon
from .segmenter import DocumentStructure, Span


class ActionKind(str, Enum):
    DELETE = "delete"
    INSERT = "insert"
    MODIFY = "modify"


class ActionLevel(str, Enum):
    SENTENCE = "sentence"
    WORD = "word"
    CHARACTER = "character"


class TriggerMode(str, Enum):
    INLINE = "inline"
    RETROSPECTIVE = "retrospective"


@dataclass(frozen=True, slots=True)
class TriggerPoint:
    """When a detour is resolved: after ``anchor`` characters of the
    initial text have been typed."""

    mode: TriggerMode
    anchor: int


@dataclass(frozen=True, slots=True)
class EditAction:
    kind: ActionKind
    level: ActionLevel
    target: Span  # span of the affected element in the final text
    detour_text: str  # planted filler / synonym / typo'd form; "" for inserts
    trigger: TriggerPoint
    detour_span: Span  # where the detour sits in the initial text (zero-width for inserts)
    resolution_text: str  # text typed when resolving ("" for deletes)


@dataclass(frozen=True)
class EditPlan:
    initial_text: str
    actions: tuple[EditAction, ...]  # ordered by trigger anchor
    final_text: str


_LEVELS = ("paragraph", "sentence", "word", "character")


@dataclass(frozen=True)
class EditingParameters:
    """Per-level action rates, each a probability in [0, 1].

    Levels mirror the paragraph/sentence/word/character hierarchy:
    paragraph-level rates select whole sentences; sentence-level and
    word-level rates both select words (word-level draws take
    precedence, sentence-level rates apply to words left untouched);
    the character level is a single typo rate per word. Rates within a
    level may not sum past 1, so each element gets at most one action.
    """

    paragraph_deletion_rate: float = 0.0
    paragraph_insertion_rate: float = 0.0
    paragraph_modification_rate: float = 0.0
    sentence_deletion_rate: float = 0.0
    sentence_insertion_rate: float = 0.0
    sentence_modification_rate: float = 0.0
    word_deletion_rate: float = 0.0
    word_insertion_rate: float = 0.0
    word_modification_rate: float = 0.0
    char_typo_rate: float = 0.0

    def level_rates(self, level: str) -> tuple[float, ...]:
        if level == "character":
            return (self.char_typo_rate,)
        return (
            getattr(self, f"{level}_deletion_rate"),
            getattr(self, f"{level}_insertion_rate"),
            getattr(self, f"{level}_modification_rate"),
        )


def validate_params(params: EditingParameters) -> None:
    """Raise ValidationError unless every level's rates are valid.

    Each rate must lie in [0, 1] and, per level, the rates may sum to at
    most 1 (so one categorical draw per element stays well-formed).
    """
    for level in _LEVELS:
        rates = params.level_rates(level)
        for rate in rates:
            if not (0.0 <= rate <= 1.0):
                raise ValidationError(f"{level} level rate {rate!r} outside [0, 1]")
        total = sum(rates)
        if total > 1.0 + 1e-9:
            raise ValidationError(f"{level} level rates sum to {total:.3f}, exceeding 1")


# --- typo synthesis -------------------------------------------------------

_QWERTY_NEIGHBORS = {
    "q": "wa", "w": "qeas", "e": "wrsd", "r": "etdf", "t": "ryfg",
    "y": "tugh", "u": "yihj", "i": "uojk", "o": "ipkl", "p": "ol",
    "a": "qwsz", "s": "aedwxz", "d": "srefcx", "f": "dtrgvc", "g": "ftyhbv",
    "h": "gyujnb", "j": "hukimn", "k": "jiolm", "l": "kop",
    "z": "asx", "x": "zsdc", "c": "xdfv", "v": "cfgb", "b": "vghn",
    "n": "bhjm", "m": "njk",
}


def _match_case(template_char: str, ch: str) -> str:
    return ch.upper() if template_char.isupper() else ch


def _typo(word: str, rng: random.Random) -> str | None:
    swap_positions = [i for i in range(len(word) - 1) if word[i] != word[i + 1]]
    sub_positions = [i for i, ch in enumerate(word) if ch.lower() in _QWERTY_NEIGHBORS]
    prefer_swap = rng.random() < 0.5
    if prefer_swap and swap_positions:
        i = swap_positions[rng.randrange(len(swap_positions))]
        return word[:i] + word[i + 1] + word[i] + word[i + 2 :]
    if sub_positions:
        i = sub_positions[rng.randrange(len(sub_positions))]
        neighbors = _QWERTY_NEIGHBORS[word[i].lower()]
        sub = neighbors[rng.randrange(len(neighbors))]
        return word[:i] + _match_case(word[i], sub) + word[i + 1 :]
    if swap_positions:
        i = swap_positions[rng.randrange(len(swap_positions))]
        return word[:i] + word[i + 1] + word[i] + word[i + 2 :]
    return None


def generate_typo(word: str, seed: int) -> tuple[str, str] | None:
    """Misspell ``word`` by one keyboard-adjacent substitution or one
    adjacent transposition.

    Returns (detour, final) where final is the word itself, or None when
    the word is too short or non-alphabetic to typo plausibly.
    """
    if len(word) < 2 or not word.isalpha():
        return None
    detour = _typo(word, random.Random(seed))
    if detour is None:
        return None
    return detour, word


# --- trigger points -------------------------------------------------------


def assign_trigger(detour_end: int, paragraph_end: int, rng: random.Random) -> TriggerPoint:
    """Pick when a detour resolves: inline (right after the detour) or
    retrospectively, uniformly up to the end of its paragraph.

    A detour already at the paragraph end collapses to inline.
    """
    retrospective = rng.random() < 0.5
    if retrospective and paragraph_end > detour_end:
        anchor = rng.randint(detour_end + 1, paragraph_end)
        return TriggerPoint(TriggerMode.RETROSPECTIVE, anchor)
    return TriggerPoint(TriggerMode.INLINE, detour_end)


# --- plan construction ----------------------------------------------------


def _categorical(rng: random.Random, rates: tuple[float, ...]) -> ActionKind | None:
    u = rng.random()
    cumulative = 0.0
    for kind, rate in zip((ActionKind.DELETE, ActionKind.INSERT, ActionKind.MODIFY), rates):
        cumulative += rate
        if u < cumulative:
            return kind
    return None


def _cased_like(target: str, word: str) -> str:
    if target.isupper() and len(target) > 1:
        return word.upper()
    if target[:1].isupper():
        return word.capitalize()
    return word


def _whitespace_before(text: str, pos: int, floor: int) -> int:
    start = pos
    while start > floor and text[start - 1].isspace():
        start -= 1
    return start


def _whitespace_after(text: str, pos: int, ceiling: int) -> int:
    end = pos
    while end < ceiling and text[end].isspace():
        end += 1
    return end


@dataclass
class _Candidate:
    kind: ActionKind
    level: ActionLevel
    target: Span
    paragraph: int
    region_start: int = 0
    region_end: int = 0
    piece_text: str = ""  # what the initial text carries in place of the region
    detour_text: str = ""
    resolution_text: str = ""


def plan_edits(
    structure: DocumentStructure,
    params: EditingParameters,
    lexicon: Lexicon,
    seed: int,
) -> EditPlan:
    """Draw at most one action per sentence/word and stage the detours.

    Sentence-initial words are immune to word-level deletes and
    modifications; candidates whose detour cannot be sourced (no
    synonym, no filler, untypoable word) are dropped rather than
    surfaced. Identical inputs and seed produce the identical plan.
    """
    validate_params(params)
    rng = random.Random(seed)
    text = structure.text

    sentence_kinds: dict[int, ActionKind] = {}
    for s_idx in range(len(structure.sentences)):
        kind = _categorical(rng, params.level_rates("paragraph"))
        if kind is not None:
            sentence_kinds[s_idx] = kind

    word_kinds: dict[int, tuple[ActionKind, ActionLevel]] = {}
    for w_idx, word in enumerate(structure.words):
        if word.sentence in sentence_kinds:
            continue  # the enclosing sentence already owns an action
        kind = _categorical(rng, params.level_rates("word"))
        level = ActionLevel.WORD
        if kind is None:
            kind = _categorical(rng, params.level_rates("sentence"))
        if kind is None and rng.random() < params.char_typo_rate:
            kind, level = ActionKind.MODIFY, ActionLevel.CHARACTER
        if kind is not None:
            word_kinds[w_idx] = (kind, level)

    raw: list[_Candidate] = []
    for s_idx, kind in sentence_kinds.items():
        sent = structure.sentences[s_idx]
        raw.append(_Candidate(kind, ActionLevel.SENTENCE, sent.span, sent.paragraph))
    for w_idx, (kind, level) in word_kinds.items():
        word = structure.words[w_idx]
        sent = structure.sentences[word.sentence]
        raw.append(_Candidate(kind, level, word.span, sent.paragraph))
    raw.sort(key=lambda c: c.target.start)

    word_by_start = {w.start: w for w in structure.words}
    sentence_by_start = {s.start: s for s in structure.sentences}

    candidates: list[_Candidate] = []
    consumed = 0  # final-text offset already claimed by an earlier region
    for cand in raw:
        target_text = cand.target.slice(text)
        if cand.level is ActionLevel.SENTENCE:
            sent = sentence_by_start[cand.target.start]
            if cand.kind is ActionKind.DELETE:
                filler = lexicon.redundant_sentence(rng)
                if filler is None:
                    continue
                cand.region_start = cand.region_end = cand.target.start
                cand.piece_text = filler + " "
                cand.detour_text = filler
            elif cand.kind is ActionKind.INSERT:
                para = structure.paragraphs[sent.paragraph]
                pre = _whitespace_before(text, cand.target.start, max(para.start, consumed))
                if pre == cand.target.start:
                    continue  # first sentence of its paragraph: keep it
                cand.region_start, cand.region_end = pre, cand.target.end
                cand.resolution_text = text[pre : cand.target.end]
            else:
                continue  # no safe detour source for whole-sentence rewrites
        else:
            word = word_by_start[cand.target.start]
            sent = structure.sentences[word.sentence]
            if cand.level is ActionLevel.CHARACTER:
                if len(target_text) < 2 or not target_text.isalpha():
                    continue
                detour = _typo(target_text, rng)
                if detour is None:
                    continue
                cand.region_start, cand.region_end = cand.target.start, cand.target.end
                cand.piece_text = cand.detour_text = detour
                cand.resolution_text = target_text
            elif cand.kind is ActionKind.DELETE:
                if word.sentence_initial:
                    continue
                filler = lexicon.redundant_word(rng)
                cand.region_start = cand.region_end = cand.target.start
                cand.piece_text = filler + " "
                cand.detour_text = filler
            elif cand.kind is ActionKind.MODIFY:
                if word.sentence_initial:
                    continue
                synonym = lexicon.synonym(target_text, rng)
                if synonym is None:
                    continue
                cased = _cased_like(target_text, synonym)
                if cased == target_text:
                    continue
                cand.region_start, cand.region_end = cand.target.start, cand.target.end
                cand.piece_text = cand.detour_text = cased
                cand.resolution_text = target_text
            else:  # word-level insert: omit now, type in later
                pre = _whitespace_before(text, cand.target.start, max(sent.start, consumed))
                if pre < cand.target.start:
                    cand.region_start, cand.region_end = pre, cand.target.end
                else:
                    post = _whitespace_after(text, cand.target.end, sent.end)
                    cand.region_start, cand.region_end = cand.target.start, post
                cand.resolution_text = text[cand.region_start : cand.region_end]
        consumed = max(consumed, cand.region_end)
        candidates.append(cand)

    # lay out the initial text, remembering where verbatim runs land
    pieces: list[str] = []
    runs: list[tuple[int, int, int]] = []  # (final start, initial start, length)
    detour_spans: list[Span] = []
    fpos = ipos = 0
    for cand in candidates:
        if cand.region_start > fpos:
            run = text[fpos : cand.region_start]
            runs.append((fpos, ipos, len(run)))
            pieces.append(run)
            ipos += len(run)
        detour_spans.append(Span(ipos, ipos + len(cand.piece_text)))
        if cand.piece_text:
            pieces.append(cand.piece_text)
            ipos += len(cand.piece_text)
        fpos = cand.region_end
    if fpos < len(text):
        runs.append((fpos, ipos, len(text) - fpos))
        pieces.append(text[fpos:])
        ipos += len(text) - fpos
    initial_text = "".join(pieces)

    def to_initial(offset: int) -> int:
        for f_start, i_start, length in runs:
            if offset <= f_start:
                return i_start
            if offset <= f_start + length:
                return i_start + (offset - f_start)
        return len(initial_text)

    actions: list[EditAction] = []
    for cand, detour_span in zip(candidates, detour_spans):
        para_end = to_initial(structure.paragraphs[cand.paragraph].end)
        trigger = assign_trigger(detour_span.end, para_end, rng)
        actions.append(
            EditAction(
                kind=cand.kind,
                level=cand.level,
                target=cand.target,
                detour_text=cand.detour_text,
                trigger=trigger,
                detour_span=detour_span,
                resolution_text=cand.resolution_text,
            )
        )
    actions.sort(key=lambda a: (a.trigger.anchor, a.target.start))

    plan = EditPlan(initial_text=initial_text, actions=tuple(actions), final_text=text)
    replayed = replay_plan(plan)
    if replayed != text:
        raise PlanIntegrityError(
            f"plan does not replay to its final text ({replayed!r} != {text!r})"
        )
    return plan


# --- replay ---------------------------------------------------------------


def live_offset(position: int, target_start: int, applied: list[tuple[int, int, int]]) -> int:
    """Map an initial-text offset through already-resolved actions.

    ``applied`` holds (initial offset, final-text start, length delta)
    per resolved action; the final-text start breaks ties between
    coincident offsets (e.g. two adjacent omission gaps).
    """
    shift = 0
    for other_pos, other_target, delta in applied:
        if other_pos < position or (other_pos == position and other_target < target_start):
            shift += delta
    return position + shift


def replay_plan(plan: EditPlan) -> str:
    """Apply the plan's actions over its initial text, in trigger order.

    This is the text-level oracle for the keystroke scheduler: no timing,
    just the buffer arithmetic.
    """
    buffer = plan.initial_text
    applied: list[tuple[int, int, int]] = []
    ordered = sorted(plan.actions, key=lambda a: (a.trigger.anchor, a.target.start))
    for action in ordered:
        start = live_offset(action.detour_span.start, action.target.start, applied)
        width = action.detour_span.width
        end = start + width
        if not (0 <= start <= end <= len(buffer)):
            raise PlanIntegrityError(f"action at {action.target} resolves outside the buffer")
        if action.kind is ActionKind.DELETE:
            buffer = buffer[:start] + buffer[end:]
        elif action.kind is ActionKind.INSERT:
            buffer = buffer[:start] + action.resolution_text + buffer[start:]
        else:
            buffer = buffer[:start] + action.resolution_text + buffer[end:]
        delta = len(action.resolution_text) - width
        applied.append((action.detour_span.start, action.target.start, delta))
    return buffer
