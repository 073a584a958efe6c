"""Agent runtime: presets, prompt constraints, backends, live sessions.

A session binds a response backend to the typing pipeline. Parameter
updates are atomic (an invalid patch leaves the config untouched) and
pace updates re-time the not-yet-emitted remainder of an in-flight
trace; emitted events are never rewritten. Editing-rate updates apply
from the next message, since re-planning a trace under the renderer
would break its replay.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field, fields, replace
from typing import Mapping, Protocol, Sequence

import requests

from .errors import BackendUnavailable, ConfigError, ValidationError
from .lexicon import Lexicon, load_lexicon
from .pipeline import derive_seed, synthesize_trace
from .planning import EditingParameters, validate_params
from .scheduling import (
    EventTiming,
    EventTrace,
    KeystrokeEvent,
    TemporalParameters,
    retime,
    validate_temporal,
)
from .segmenter import segment

PROMPT_TEMPLATE = (
    "(Please provide a reply with no more than {sentences} sentences, "
    "and less than {words} words in total. Use English only please.)"
)


@dataclass(frozen=True)
class PromptConstraints:
    max_sentences: int = 2
    max_words: int = 30
    language_restriction: str = "English only"

    def __post_init__(self):
        if self.max_sentences < 1:
            raise ValidationError(f"max_sentences must be >= 1, got {self.max_sentences}")
        if self.max_words < self.max_sentences:
            raise ValidationError("max_words must be >= max_sentences")


def build_prompt(user_message: str, constraints: PromptConstraints) -> str:
    """Append the length/language constraint line to the user's message."""
    if not user_message:
        raise ValidationError("user message must not be empty")
    line = PROMPT_TEMPLATE.format(
        sentences=constraints.max_sentences, words=constraints.max_words
    )
    return f"{user_message}\n{line}"


# --- backends ---------------------------------------------------------------


class Backend(Protocol):
    def reply(self, user_message: str, prompt: str) -> str:
        """Produce the finalized response text for one exchange."""


class EchoBackend:
    """Returns the user's message verbatim; handy for tests and demos."""

    def reply(self, user_message: str, prompt: str) -> str:
        return user_message


class ScriptedBackend:
    """Cycles through a fixed response table, ignoring the inputs."""

    def __init__(self, responses: Sequence[str]):
        if not responses:
            raise ConfigError("scripted backend needs at least one response")
        self._responses = tuple(responses)
        self._index = 0

    def reply(self, user_message: str, prompt: str) -> str:
        response = self._responses[self._index % len(self._responses)]
        self._index += 1
        return response


class RemoteLLMBackend:
    """POSTs the constrained prompt to a completions-style endpoint."""

    def __init__(self, endpoint: str, model: str, auth_env: str = "",
                 timeout_ms: float = 10000.0, post=requests.post):
        self.endpoint = endpoint
        self.model = model
        self.auth_env = auth_env
        self.timeout_ms = timeout_ms
        self._post = post

    def reply(self, user_message: str, prompt: str) -> str:
        headers = {}
        if self.auth_env:
            token = os.environ.get(self.auth_env, "")
            if token:
                headers["Authorization"] = f"Bearer {token}"
        try:
            response = self._post(
                self.endpoint,
                json={"model": self.model, "prompt": prompt},
                headers=headers,
                timeout=self.timeout_ms / 1000.0,
            )
        except Exception as exc:
            raise BackendUnavailable(f"backend request failed: {exc}") from exc
        if getattr(response, "status_code", 500) != 200:
            raise BackendUnavailable(f"backend returned status {response.status_code}")
        try:
            body = response.json()
            return body["choices"][0]["text"]
        except Exception as exc:
            raise BackendUnavailable(f"unexpected backend payload: {exc}") from exc


@dataclass(frozen=True)
class BackendBinding:
    """Config-level description of a backend, buildable on demand."""

    kind: str = "echo"  # echo | scripted | remote
    responses: tuple[str, ...] = ()
    endpoint: str = ""
    model: str = ""
    auth_env: str = ""
    timeout_ms: float = 10000.0

    def build(self) -> Backend:
        if self.kind == "echo":
            return EchoBackend()
        if self.kind == "scripted":
            return ScriptedBackend(self.responses)
        if self.kind == "remote":
            if not self.endpoint:
                raise ConfigError("remote backend needs an endpoint")
            return RemoteLLMBackend(self.endpoint, self.model, self.auth_env, self.timeout_ms)
        raise ConfigError(f"unknown backend kind {self.kind!r}")


# --- agent configuration ----------------------------------------------------


@dataclass(frozen=True)
class AgentConfig:
    preset: str
    temporal: TemporalParameters
    editing: EditingParameters
    constraints: PromptConstraints = field(default_factory=PromptConstraints)
    backend: BackendBinding = field(default_factory=BackendBinding)


_BLUE_TEMPORAL = TemporalParameters(
    char_pace_mean_ms=15.0, char_pace_std_ms=3.0,
    space_lag_mean_ms=25.0, space_lag_std_ms=8.0,
    deletion_pace_mean_ms=30.0, deletion_pace_std_ms=8.0,
    cursor_pace_mean_ms=4.0, cursor_pace_std_ms=1.0,
    pause_rate=0.0, thinking_mean_s=0.0, thinking_std_s=0.0,
)

_GREEN_TEMPORAL = TemporalParameters(
    char_pace_mean_ms=80.0, char_pace_std_ms=25.0,
    space_lag_mean_ms=150.0, space_lag_std_ms=60.0,
    deletion_pace_mean_ms=60.0, deletion_pace_std_ms=20.0,
    cursor_pace_mean_ms=8.0, cursor_pace_std_ms=2.0,
    pause_rate=0.15, thinking_mean_s=1.5, thinking_std_s=0.5,
)

_RED_EDITING = EditingParameters(
    paragraph_insertion_rate=0.10,
    word_deletion_rate=0.05,
    word_insertion_rate=0.02,
    word_modification_rate=0.08,
    char_typo_rate=0.03,
)

_PRESETS = {
    "blue": AgentConfig(preset="blue", temporal=_BLUE_TEMPORAL, editing=EditingParameters()),
    "green": AgentConfig(preset="green", temporal=_GREEN_TEMPORAL, editing=EditingParameters()),
    "red": AgentConfig(preset="red", temporal=_GREEN_TEMPORAL, editing=_RED_EDITING),
}


def preset_names() -> tuple[str, ...]:
    return tuple(_PRESETS)


def preset(name: str) -> AgentConfig:
    """The three built-in behavior bundles: blue (baseline), green
    (hesitation only), red (hesitation + self-editing)."""
    try:
        return _PRESETS[name.lower()]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; expected one of {sorted(_PRESETS)}") from None


def apply_patch(config: AgentConfig, patch: Mapping[str, object]) -> AgentConfig:
    """Merge a flat parameter patch into a config, validating the result.

    Raises ValidationError (and changes nothing) on unknown keys or
    invalid value combinations; a config that drifts from its preset's
    values is relabeled "custom".
    """
    if not patch:
        return config
    temporal_keys = {f.name for f in fields(TemporalParameters)}
    editing_keys = {f.name for f in fields(EditingParameters)}
    unknown = set(patch) - temporal_keys - editing_keys
    if unknown:
        raise ValidationError(f"unknown parameters: {sorted(unknown)}")
    temporal = replace(
        config.temporal, **{k: float(v) for k, v in patch.items() if k in temporal_keys}
    )
    editing = replace(
        config.editing, **{k: float(v) for k, v in patch.items() if k in editing_keys}
    )
    validate_temporal(temporal)
    validate_params(editing)
    if temporal == config.temporal and editing == config.editing:
        return config
    return replace(config, preset="custom", temporal=temporal, editing=editing)


# --- sessions ---------------------------------------------------------------


@dataclass(frozen=True)
class Exchange:
    index: int
    sender: str  # "user" | "agent"
    text: str
    words: int
    sentences: int


def _counted(index: int, sender: str, text: str) -> Exchange:
    structure = segment(text)
    return Exchange(index, sender, text, structure.word_count, structure.sentence_count)


class Session:
    """One conversation: fixed seed, mutable parameters, a transcript,
    and the streaming cursor over the trace currently being typed."""

    def __init__(
        self,
        config: AgentConfig,
        seed: int,
        lexicon: Lexicon | None = None,
        backend: Backend | None = None,
        session_id: str = "",
    ):
        validate_temporal(config.temporal)
        validate_params(config.editing)
        self.session_id = session_id
        self.config = config
        self.seed = seed
        self.lexicon = lexicon if lexicon is not None else load_lexicon()
        self.backend = backend if backend is not None else config.backend.build()
        self.message_index = 0
        self.transcript: list[Exchange] = []
        self._lock = threading.Lock()
        self._pending_events: list[KeystrokeEvent] = []
        self._pending_timings: list[EventTiming] = []
        self._pending_pos = 0
        self._clock_ms = 0.0  # trace-local time after the last emitted event

    def respond(self, user_message: str) -> EventTrace:
        """Fetch the backend response and stage its typing performance."""
        prompt = build_prompt(user_message, self.config.constraints)
        text = self.backend.reply(user_message, prompt)
        with self._lock:
            index = self.message_index
            self.message_index += 1
            self.transcript.append(_counted(index, "user", user_message))
            trace = synthesize_trace(
                text,
                self.config.temporal,
                self.config.editing,
                self.lexicon,
                derive_seed(self.seed, index, "message"),
            )
            self.transcript.append(_counted(index, "agent", text))
            self._pending_events = list(trace.events)
            self._pending_timings = list(trace.timings)
            self._pending_pos = 0
            self._clock_ms = 0.0
        return trace

    def next_event(self) -> KeystrokeEvent | None:
        """Pop the next unemitted event of the current trace, if any."""
        with self._lock:
            if self._pending_pos >= len(self._pending_events):
                return None
            event = self._pending_events[self._pending_pos]
            self._pending_pos += 1
            self._clock_ms = event.t
            if event.kind == "pause" and isinstance(event.payload, (int, float)):
                self._clock_ms += event.payload
            return event

    def pending_events(self) -> list[KeystrokeEvent]:
        with self._lock:
            return self._pending_events[self._pending_pos :]

    def finish_trace(self) -> None:
        with self._lock:
            self._pending_events = []
            self._pending_timings = []
            self._pending_pos = 0

    def update_params(self, patch: Mapping[str, object]) -> AgentConfig:
        """Apply a validated parameter patch.

        Pace changes re-time the unemitted remainder of the current
        trace in place; already-emitted events keep their timestamps.
        """
        with self._lock:
            updated = apply_patch(self.config, patch)
            if updated is self.config:
                return self.config
            if updated.temporal != self.config.temporal and self._pending_pos < len(self._pending_events):
                suffix = retime(
                    self._pending_events[self._pending_pos :],
                    self._pending_timings[self._pending_pos :],
                    updated.temporal,
                    self._clock_ms,
                )
                self._pending_events[self._pending_pos :] = suffix
            self.config = updated
            return updated
