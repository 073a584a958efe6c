"""Wire protocol: newline-delimited JSON messages, one object per line.

Client -> server: open_session, user_message, update_params,
set_visibility. Server -> client: waiting_room, session_ready, event,
trace_done, notice. The same encoding is used over the websocket (one
JSON document per text frame) and in recorded transcripts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .errors import ValidationError
from .scheduling import TEXT, KeystrokeEvent


class WireError(ValidationError):
    """Inbound message cannot be parsed or fails field validation."""


# --- client -> server -------------------------------------------------------


@dataclass(frozen=True)
class OpenSession:
    preset: str | None = None
    params: Mapping[str, float] | None = None  # flat overrides over the preset
    visibility: bool | None = None


@dataclass(frozen=True)
class UserMessage:
    text: str


@dataclass(frozen=True)
class UpdateParams:
    patch: Mapping[str, float]


@dataclass(frozen=True)
class SetVisibility:
    show_typing: bool


ClientMessage = OpenSession | UserMessage | UpdateParams | SetVisibility


def parse_client(raw: str) -> ClientMessage:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise WireError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("type"), str):
        raise WireError("message must be an object with a string 'type'")
    kind = data["type"]
    if kind == "open_session":
        preset = data.get("preset")
        params = data.get("params")
        visibility = data.get("visibility")
        if preset is not None and not isinstance(preset, str):
            raise WireError("open_session.preset must be a string")
        if params is not None and not isinstance(params, dict):
            raise WireError("open_session.params must be an object")
        if visibility is not None and not isinstance(visibility, bool):
            raise WireError("open_session.visibility must be a boolean")
        return OpenSession(preset=preset, params=params, visibility=visibility)
    if kind == "user_message":
        text = data.get("text")
        if not isinstance(text, str) or not text:
            raise WireError("user_message.text must be a non-empty string")
        return UserMessage(text=text)
    if kind == "update_params":
        patch = data.get("patch")
        if not isinstance(patch, dict):
            raise WireError("update_params.patch must be an object")
        return UpdateParams(patch=patch)
    if kind == "set_visibility":
        show = data.get("show_typing")
        if not isinstance(show, bool):
            raise WireError("set_visibility.show_typing must be a boolean")
        return SetVisibility(show_typing=show)
    raise WireError(f"unknown message type {kind!r}")


# --- server -> client -------------------------------------------------------


def _encode(message: dict) -> str:
    return json.dumps(message, ensure_ascii=False, separators=(",", ":"))


def waiting_room(delay_ms: float) -> str:
    return _encode({"type": "waiting_room", "delay_ms": delay_ms})


def session_ready(session_id: str) -> str:
    return _encode({"type": "session_ready", "session_id": session_id})


def event_message(message_id: int, event: KeystrokeEvent) -> str:
    return _encode(
        {
            "type": "event",
            "message_id": message_id,
            "event": {"t": event.t, "kind": event.kind, "payload": event.payload, "caret": event.caret},
        }
    )


def final_text_message(message_id: int, text: str, duration_ms: float) -> str:
    """Single catch-all event used when the typing process is hidden."""
    return _encode(
        {
            "type": "event",
            "message_id": message_id,
            "event": {"t": duration_ms, "kind": TEXT, "payload": text, "caret": len(text)},
        }
    )


def trace_done(message_id: int) -> str:
    return _encode({"type": "trace_done", "message_id": message_id})


def notice(kind: str, text: str) -> str:
    return _encode({"type": "notice", "kind": kind, "text": text})
