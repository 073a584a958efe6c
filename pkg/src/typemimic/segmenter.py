"""Split a finalized response into paragraphs, sentences, and words.

The returned structure keeps the original text and describes every level
as (start, end) spans into it, so the segmentation is lossless by
construction and downstream edit planning can do exact span arithmetic.

Rules (deliberately simple; chat responses are short):
  - paragraph boundaries: blank lines (a newline, optional spaces, newline)
  - sentence boundaries: a run of . ! ? followed by whitespace or end of text
  - words: whitespace-delimited tokens with non-alphanumeric edge
    characters trimmed off (interior apostrophes/hyphens survive)

Abbreviations ("e.g.", "Dr.") are not special-cased.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import StructureError

_PARAGRAPH_SEP = re.compile(r"\n[ \t]*\n[ \t\n]*")
_SENTENCE_END = re.compile(r"[.!?]+(?=\s|$)")
_TOKEN = re.compile(r"\S+")


@dataclass(frozen=True, slots=True)
class Span:
    start: int
    end: int

    def slice(self, text: str) -> str:
        return text[self.start : self.end]

    @property
    def width(self) -> int:
        return self.end - self.start


@dataclass(frozen=True, slots=True)
class Sentence:
    start: int
    end: int
    paragraph: int  # index into DocumentStructure.paragraphs

    @property
    def span(self) -> Span:
        return Span(self.start, self.end)


@dataclass(frozen=True, slots=True)
class Word:
    start: int
    end: int
    sentence: int  # index into DocumentStructure.sentences
    sentence_initial: bool

    @property
    def span(self) -> Span:
        return Span(self.start, self.end)


@dataclass(frozen=True)
class DocumentStructure:
    """Four-level span view over a final text. Characters are implicit:
    they are the scalar values inside each word span."""

    text: str
    paragraphs: tuple[Span, ...] = field(default=())
    sentences: tuple[Sentence, ...] = field(default=())
    words: tuple[Word, ...] = field(default=())

    def word_text(self, index: int) -> str:
        w = self.words[index]
        return self.text[w.start : w.end]

    def sentence_text(self, index: int) -> str:
        s = self.sentences[index]
        return self.text[s.start : s.end]

    def words_of_sentence(self, index: int) -> list[int]:
        return [i for i, w in enumerate(self.words) if w.sentence == index]

    def sentences_of_paragraph(self, index: int) -> list[int]:
        return [i for i, s in enumerate(self.sentences) if s.paragraph == index]

    @property
    def word_count(self) -> int:
        return len(self.words)

    @property
    def sentence_count(self) -> int:
        return len(self.sentences)


def _trim_token(text: str, start: int, end: int) -> tuple[int, int]:
    # strip non-alphanumeric edges; interior punctuation stays
    while start < end and not text[start].isalnum():
        start += 1
    while end > start and not text[end - 1].isalnum():
        end -= 1
    return start, end


def _paragraph_spans(text: str) -> list[Span]:
    spans = []
    pos = 0
    for match in _PARAGRAPH_SEP.finditer(text):
        if match.start() > pos:
            spans.append((pos, match.start()))
        pos = match.end()
    if pos < len(text):
        spans.append((pos, len(text)))
    trimmed = []
    for start, end in spans:
        while start < end and text[start].isspace():
            start += 1
        while end > start and text[end - 1].isspace():
            end -= 1
        if end > start:
            trimmed.append(Span(start, end))
    return trimmed


def _sentence_spans(text: str, para: Span, para_index: int) -> list[Sentence]:
    sentences = []
    pos = para.start
    for match in _SENTENCE_END.finditer(text, para.start, para.end):
        end = match.end()
        start = pos
        while start < end and text[start].isspace():
            start += 1
        if end > start:
            sentences.append(Sentence(start, end, para_index))
        pos = end
    # trailing text without terminal punctuation is still a sentence
    start, end = pos, para.end
    while start < end and text[start].isspace():
        start += 1
    if end > start:
        sentences.append(Sentence(start, end, para_index))
    return sentences


def segment(text: str) -> DocumentStructure:
    """Build the paragraph/sentence/word structure of ``text``.

    Empty input yields an empty structure; this never raises.
    """
    paragraphs = _paragraph_spans(text)
    sentences: list[Sentence] = []
    for p_idx, para in enumerate(paragraphs):
        sentences.extend(_sentence_spans(text, para, p_idx))
    words: list[Word] = []
    for s_idx, sent in enumerate(sentences):
        first = True
        for match in _TOKEN.finditer(text, sent.start, sent.end):
            start, end = _trim_token(text, match.start(), match.end())
            if end > start:
                words.append(Word(start, end, s_idx, first))
                first = False
    return DocumentStructure(
        text=text,
        paragraphs=tuple(paragraphs),
        sentences=tuple(sentences),
        words=tuple(words),
    )


def _check_ordered(spans, text_len: int, label: str) -> None:
    prev_end = 0
    for i, sp in enumerate(spans):
        if not (0 <= sp.start < sp.end <= text_len):
            raise StructureError(f"{label} {i} span ({sp.start}, {sp.end}) out of bounds")
        if sp.start < prev_end:
            raise StructureError(f"{label} {i} overlaps or precedes its predecessor")
        prev_end = sp.end


def verify(structure: DocumentStructure) -> None:
    """Raise StructureError unless the structure is internally consistent."""
    text = structure.text
    _check_ordered(structure.paragraphs, len(text), "paragraph")
    _check_ordered([s.span for s in structure.sentences], len(text), "sentence")
    _check_ordered([w.span for w in structure.words], len(text), "word")

    prev_parent = 0
    for i, sent in enumerate(structure.sentences):
        if not (0 <= sent.paragraph < len(structure.paragraphs)):
            raise StructureError(f"sentence {i} has no parent paragraph")
        para = structure.paragraphs[sent.paragraph]
        if sent.start < para.start or sent.end > para.end:
            raise StructureError(f"sentence {i} escapes paragraph {sent.paragraph}")
        if sent.paragraph < prev_parent:
            raise StructureError(f"sentence {i} parent order broken")
        prev_parent = sent.paragraph

    initial_seen: dict[int, int] = {}
    prev_parent = 0
    for i, word in enumerate(structure.words):
        if not (0 <= word.sentence < len(structure.sentences)):
            raise StructureError(f"word {i} has no parent sentence")
        sent = structure.sentences[word.sentence]
        if word.start < sent.start or word.end > sent.end:
            raise StructureError(f"word {i} escapes sentence {word.sentence}")
        if word.sentence < prev_parent:
            raise StructureError(f"word {i} parent order broken")
        prev_parent = word.sentence
        token = text[word.start : word.end]
        if not token or any(ch.isspace() for ch in token):
            raise StructureError(f"word {i} contains whitespace")
        count = initial_seen.setdefault(word.sentence, 0)
        if word.sentence_initial:
            if count:
                raise StructureError(f"word {i} flagged initial but is not first")
            initial_seen[word.sentence] = 1
        elif not count:
            raise StructureError(f"word {i} is first in sentence {word.sentence} but unflagged")

    for s_idx in initial_seen:
        if initial_seen[s_idx] != 1:
            raise StructureError(f"sentence {s_idx} has no sentence-initial word")


def flatten(structure: DocumentStructure) -> str:
    """Return the exact text the structure was built from.

    Inverse of :func:`segment`; raises StructureError if the spans are
    inconsistent with the stored text.
    """
    verify(structure)
    return structure.text
