"""Synonym and filler-word sources feeding edit detours.

The default lexicon is fully offline (bundled word lists), so planning
never needs the network. A remote synonym service can be layered in
front of the offline map; remote failures silently fall through, they
never reach callers.
"""

from __future__ import annotations

import json
import random
import threading
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Mapping, Protocol, Sequence

import requests

from .errors import ConfigError


class SynonymSource(Protocol):
    def lookup(self, word: str) -> Sequence[str] | None:
        """Return synonym candidates for a lowercase word, or None on miss."""


class OfflineSynonyms:
    """In-memory word -> synonyms map, optionally loaded from a JSON file."""

    def __init__(self, mapping: Mapping[str, Sequence[str]]):
        self._map = {k.lower(): tuple(v) for k, v in mapping.items()}

    @classmethod
    def from_file(cls, path: str | Path) -> "OfflineSynonyms":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError(f"synonym file {path} is not a JSON object")
        return cls(data)

    def lookup(self, word: str) -> Sequence[str] | None:
        return self._map.get(word)


class RemoteSynonyms:
    """HTTP synonym service: GET {endpoint}/words/{word}/synonyms.

    Expects a JSON body like {"word": ..., "synonyms": [...]}. Timeouts
    and bad responses are reported as a miss (None) so a chained offline
    source can take over.
    """

    def __init__(self, endpoint: str, timeout_ms: float = 1000.0, get: Callable = requests.get):
        self.endpoint = endpoint.rstrip("/")
        self.timeout_ms = timeout_ms
        self._get = get

    def lookup(self, word: str) -> Sequence[str] | None:
        url = f"{self.endpoint}/words/{word}/synonyms"
        try:
            response = self._get(url, timeout=self.timeout_ms / 1000.0)
            if getattr(response, "status_code", 500) != 200:
                return None
            body = response.json()
        except Exception:
            return None
        synonyms = body.get("synonyms") if isinstance(body, dict) else None
        if not isinstance(synonyms, list):
            return None
        return [s for s in synonyms if isinstance(s, str)]


def _clean_candidates(word: str, raw: Sequence[str]) -> tuple[str, ...]:
    # single-word candidates only, never the word itself
    seen = []
    for cand in raw:
        cand = cand.strip().lower()
        if not cand or " " in cand or "-" in cand:
            continue
        if cand == word or cand in seen:
            continue
        seen.append(cand)
    return tuple(seen)


@dataclass(frozen=True)
class LexiconPaths:
    """Optional overrides for the bundled data files."""

    redundant_words: str | None = None
    synonyms: str | None = None
    redundant_sentences: str | None = None
    remote_endpoint: str | None = None
    remote_timeout_ms: float = 1000.0


class Lexicon:
    """Handle bundling filler words, filler sentences, and synonym sources.

    Synonym lookups are cached per handle; cached entries never change
    within a session, so repeated queries are byte-stable.
    """

    def __init__(
        self,
        redundant_words: Sequence[str],
        sources: Sequence[SynonymSource],
        redundant_sentences: Sequence[str] = (),
    ):
        words = tuple(w.strip() for w in redundant_words if w.strip())
        if not words:
            raise ConfigError("redundant word list must not be empty")
        self.redundant_words = words
        self.redundant_sentences = tuple(s.strip() for s in redundant_sentences if s.strip())
        self._sources = tuple(sources)
        self._cache: dict[str, tuple[str, ...]] = {}
        self._lock = threading.Lock()

    def synonym(self, word: str, rng: random.Random) -> str | None:
        """A synonym for ``word`` (never the word itself), or None.

        Deterministic for a given (cache state, word, rng state); source
        failures degrade to a miss rather than an exception.
        """
        if not word:
            return None
        key = word.lower()
        with self._lock:
            cached = self._cache.get(key)
        if cached is None:
            cached = ()
            for source in self._sources:
                raw = source.lookup(key)
                if raw:
                    cached = _clean_candidates(key, raw)
                    if cached:
                        break
            with self._lock:
                cached = self._cache.setdefault(key, cached)
        if not cached:
            return None
        return cached[rng.randrange(len(cached))]

    def redundant_word(self, rng: random.Random) -> str:
        """Uniform seeded draw from the filler-word library."""
        return self.redundant_words[rng.randrange(len(self.redundant_words))]

    def redundant_sentence(self, rng: random.Random) -> str | None:
        if not self.redundant_sentences:
            return None
        return self.redundant_sentences[rng.randrange(len(self.redundant_sentences))]


def _read_lines(path) -> list[str]:
    return [line.strip() for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


def load_lexicon(paths: LexiconPaths | None = None) -> Lexicon:
    """Build a lexicon from bundled data plus any configured overrides."""
    paths = paths or LexiconPaths()
    data = resources.files("typemimic.data")

    if paths.redundant_words:
        words = _read_lines(Path(paths.redundant_words))
    else:
        words = _read_lines(data / "redundant_words.txt")
    if paths.redundant_sentences:
        sentences = _read_lines(Path(paths.redundant_sentences))
    else:
        sentences = _read_lines(data / "redundant_sentences.txt")

    if paths.synonyms:
        offline = OfflineSynonyms.from_file(paths.synonyms)
    else:
        with (data / "synonyms.json").open(encoding="utf-8") as fh:
            offline = OfflineSynonyms(json.load(fh))

    sources: list[SynonymSource] = []
    if paths.remote_endpoint:
        sources.append(RemoteSynonyms(paths.remote_endpoint, paths.remote_timeout_ms))
    sources.append(offline)
    return Lexicon(words, sources, sentences)
