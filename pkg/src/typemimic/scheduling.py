"""Turn an edit plan into a timed keystroke-event trace.

Every delay is drawn from a normal distribution truncated at zero
(resampled, then clamped), one distribution per pace parameter. Traces
use virtual timestamps: milliseconds from trace start, never wall-clock,
so tests and replays don't sleep. Each event also keeps the standard
normal draw behind its delay, which lets a live session re-time the
unemitted suffix of a trace when pace parameters change mid-stream.

``apply_trace`` is the reference replay interpreter: feeding a trace's
events through it must reproduce the plan's final text byte-exactly.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Sequence

from .errors import PlanIntegrityError, ReplayError, ValidationError
from .planning import ActionKind, EditingParameters, EditPlan, live_offset

TYPE = "type"
DELETE = "delete"
MOVE = "move"
PAUSE = "pause"

# full-text payload used on the wire when the typing process is hidden;
# never produced by the scheduler itself
TEXT = "text"


@dataclass(frozen=True)
class TemporalParameters:
    """Pace and hesitation knobs. Paces are (mean, std) in milliseconds;
    thinking-pause durations are in seconds; pause_rate is the per-word
    probability of a thinking pause."""

    char_pace_mean_ms: float = 80.0
    char_pace_std_ms: float = 25.0
    space_lag_mean_ms: float = 120.0
    space_lag_std_ms: float = 40.0
    deletion_pace_mean_ms: float = 60.0
    deletion_pace_std_ms: float = 20.0
    cursor_pace_mean_ms: float = 8.0
    cursor_pace_std_ms: float = 2.0
    pause_rate: float = 0.0
    thinking_mean_s: float = 1.5
    thinking_std_s: float = 0.5

    def pace(self, component: str) -> tuple[float, float]:
        if component == "char":
            return self.char_pace_mean_ms, self.char_pace_std_ms
        if component == "space_lag":
            return self.space_lag_mean_ms, self.space_lag_std_ms
        if component == "delete":
            return self.deletion_pace_mean_ms, self.deletion_pace_std_ms
        if component == "cursor":
            return self.cursor_pace_mean_ms, self.cursor_pace_std_ms
        if component == "thinking":
            return self.thinking_mean_s * 1000.0, self.thinking_std_s * 1000.0
        raise KeyError(component)


def validate_temporal(params: TemporalParameters) -> None:
    for name in (
        "char_pace", "space_lag", "deletion_pace", "cursor_pace"
    ):
        for suffix in ("mean_ms", "std_ms"):
            value = getattr(params, f"{name}_{suffix}")
            if not value >= 0.0:
                raise ValidationError(f"{name}_{suffix} must be >= 0, got {value!r}")
    for suffix in ("mean_s", "std_s"):
        value = getattr(params, f"thinking_{suffix}")
        if not value >= 0.0:
            raise ValidationError(f"thinking_{suffix} must be >= 0, got {value!r}")
    if not (0.0 <= params.pause_rate <= 1.0):
        raise ValidationError(f"pause_rate must be in [0, 1], got {params.pause_rate!r}")


def _draw_z(rng: random.Random, mean: float, std: float) -> float:
    """Standard-normal draw accepted only if mean + std*z >= 0.

    Resamples up to 64 times, then returns the z that clamps the value
    to exactly zero, matching truncation-by-resampling semantics.
    """
    if std <= 0.0:
        return 0.0
    for _ in range(64):
        z = rng.gauss(0.0, 1.0)
        if mean + std * z >= 0.0:
            return z
    return -mean / std


def sample_delay(mean_ms: float, std_ms: float, rng: random.Random) -> float:
    """One waiting time in ms, normally distributed and truncated at 0."""
    if mean_ms < 0.0 or std_ms < 0.0:
        raise ValidationError("pace mean and std must be >= 0")
    return max(0.0, mean_ms + std_ms * _draw_z(rng, mean_ms, std_ms))


@dataclass(frozen=True, slots=True)
class KeystrokeEvent:
    t: float  # ms from trace start
    kind: str  # type | delete | move | pause (plus "text" on the wire)
    payload: str | int | float | None  # char | None | target offset | pause ms
    caret: int  # caret offset after applying the event


@dataclass(frozen=True, slots=True)
class EventTiming:
    """Sampling record behind one event: (component, z) pairs for the gap
    before it, plus the pause-duration draw and cursor travel distance."""

    components: tuple[tuple[str, float], ...] = ()
    duration_z: float | None = None
    distance: int = 0


@dataclass(frozen=True)
class EventTrace:
    events: tuple[KeystrokeEvent, ...]
    seed: int
    temporal: TemporalParameters
    editing: EditingParameters
    final_text: str
    stats: dict[str, int] = field(default_factory=dict)
    timings: tuple[EventTiming, ...] = ()  # parallel to events; not serialized

    @property
    def duration_ms(self) -> float:
        return self.events[-1].t if self.events else 0.0


@dataclass(slots=True)
class _Record:
    kind: str
    payload: str | int | float | None
    caret: int
    timing: EventTiming


_COMPONENTS = ("char", "space_lag", "delete", "cursor", "thinking")


def _pace_table(temporal: TemporalParameters) -> dict[str, tuple[float, float]]:
    return {name: temporal.pace(name) for name in _COMPONENTS}


def _gap_ms(timing: EventTiming, paces: dict[str, tuple[float, float]]) -> float:
    total = 0.0
    for component, z in timing.components:
        mean, std = paces[component]
        value = mean + std * z
        if value < 0.0:
            value = 0.0
        if component == "cursor":
            value *= timing.distance
        total += value
    return total


def _timestamp(records: Sequence[_Record], temporal: TemporalParameters, start_ms: float = 0.0):
    clock = start_ms
    events = []
    timings = []
    paces = _pace_table(temporal)
    think_mean, think_std = paces["thinking"]
    for record in records:
        clock += _gap_ms(record.timing, paces)
        payload = record.payload
        duration = 0.0
        if record.kind == PAUSE:
            duration = max(0.0, think_mean + think_std * (record.timing.duration_z or 0.0))
            payload = duration
        events.append(KeystrokeEvent(t=clock, kind=record.kind, payload=payload, caret=record.caret))
        timings.append(record.timing)
        clock += duration
    return events, timings


def retime(
    events: Sequence[KeystrokeEvent],
    timings: Sequence[EventTiming],
    temporal: TemporalParameters,
    start_ms: float,
) -> list[KeystrokeEvent]:
    """Recompute timestamps (and pause durations) for a trace suffix under
    new pace parameters, preserving content, order, and the original
    random draws."""
    records = [
        _Record(kind=ev.kind, payload=ev.payload, caret=ev.caret, timing=tm)
        for ev, tm in zip(events, timings)
    ]
    retimed, _ = _timestamp(records, temporal, start_ms)
    return retimed


def schedule(
    plan: EditPlan,
    temporal: TemporalParameters,
    seed: int,
    editing: EditingParameters | None = None,
) -> EventTrace:
    """Emit the keystroke-event trace performing ``plan``.

    The initial text is typed in order (space lag before each word, a
    thinking pause at a word start with probability pause_rate); when an
    action's trigger anchor is reached the cursor travels to the detour,
    resolves it (backspaces, corrections, insertions), and returns to
    the running end. Identical inputs produce identical traces.
    """
    validate_temporal(temporal)
    initial = plan.initial_text
    for action in plan.actions:
        if not (action.detour_span.end <= action.trigger.anchor <= len(initial)):
            raise PlanIntegrityError(
                f"action anchor {action.trigger.anchor} outside the typing order"
            )

    rng = random.Random(seed)
    buffer: list[str] = []
    caret = 0
    records: list[_Record] = []
    applied: list[tuple[int, int, int]] = []
    word_starts = 0
    pauses = 0

    paces = _pace_table(temporal)

    def draw(component: str) -> tuple[str, float]:
        mean, std = paces[component]
        return component, _draw_z(rng, mean, std)

    def emit(kind: str, payload, components, duration_z=None, distance=0) -> None:
        records.append(
            _Record(
                kind=kind,
                payload=payload,
                caret=caret,
                timing=EventTiming(tuple(components), duration_z, distance),
            )
        )

    def type_char(ch: str, components) -> None:
        nonlocal caret
        buffer.insert(caret, ch)
        caret += 1
        emit(TYPE, ch, components)

    def move_to(target: int) -> None:
        nonlocal caret
        if caret == target:
            return
        distance = abs(caret - target)
        caret = target
        emit(MOVE, target, [draw("cursor")], distance=distance)

    def delete_backward() -> None:
        nonlocal caret
        caret -= 1
        del buffer[caret]
        emit(DELETE, None, [draw("delete")])

    def is_word_start(position: int) -> bool:
        if initial[position].isspace():
            return False
        return position == 0 or initial[position - 1].isspace()

    def resolve(action) -> None:
        nonlocal caret
        start = live_offset(action.detour_span.start, action.target.start, applied)
        width = action.detour_span.width
        end = start + width
        move_to(end)
        if action.kind is ActionKind.DELETE:
            for _ in range(width):
                delete_backward()
        elif action.kind is ActionKind.MODIFY:
            keep = 0
            detour, fixed = action.detour_text, action.resolution_text
            while keep < min(len(detour), len(fixed)) and detour[keep] == fixed[keep]:
                keep += 1
            for _ in range(width - keep):
                delete_backward()
            for ch in fixed[keep:]:
                type_char(ch, [draw("char")])
        else:  # INSERT: type the omitted slice in place
            for offset, ch in enumerate(action.resolution_text):
                components = []
                if not ch.isspace():
                    before = action.resolution_text[offset - 1] if offset else (
                        buffer[caret - 1] if caret else None
                    )
                    if before is None or before.isspace():
                        components.append(draw("space_lag"))
                components.append(draw("char"))
                type_char(ch, components)
        applied.append(
            (action.detour_span.start, action.target.start,
             len(action.resolution_text) - width)
        )
        move_to(len(buffer))

    pending = list(plan.actions)  # already ordered by (anchor, target)
    next_action = 0
    for position in range(len(initial) + 1):
        while next_action < len(pending) and pending[next_action].trigger.anchor == position:
            resolve(pending[next_action])
            next_action += 1
        if position == len(initial):
            break
        ch = initial[position]
        components = []
        if is_word_start(position):
            word_starts += 1
            lag = draw("space_lag")
            if rng.random() < temporal.pause_rate:
                pauses += 1
                duration_z = _draw_z(rng, *paces["thinking"])
                emit(PAUSE, None, [lag], duration_z=duration_z)
            else:
                components.append(lag)
        components.append(draw("char"))
        type_char(ch, components)

    if "".join(buffer) != plan.final_text:
        raise PlanIntegrityError("scheduled trace does not land on the final text")

    events, timings = _timestamp(records, temporal)
    stats: dict[str, int] = {"word_starts": word_starts, "pauses": pauses}
    for action in plan.actions:
        key = f"action:{action.level.value}:{action.kind.value}"
        stats[key] = stats.get(key, 0) + 1
    return EventTrace(
        events=tuple(events),
        seed=seed,
        temporal=temporal,
        editing=editing if editing is not None else EditingParameters(),
        final_text=plan.final_text,
        stats=stats,
        timings=tuple(timings),
    )


def apply_trace(events: Iterable[KeystrokeEvent]) -> str:
    """Replay events over an empty buffer and return the resulting text.

    Raises ReplayError (with the offending event index) on caret
    violations: moving outside the buffer, deleting at offset zero, or a
    recorded caret that disagrees with the simulated one.
    """
    buffer: list[str] = []
    caret = 0
    for index, event in enumerate(events):
        if event.kind == TYPE:
            if not isinstance(event.payload, str) or len(event.payload) != 1:
                raise ReplayError(index, f"type payload must be one character, got {event.payload!r}")
            buffer.insert(caret, event.payload)
            caret += 1
        elif event.kind == DELETE:
            if caret == 0:
                raise ReplayError(index, "delete backward at offset 0")
            caret -= 1
            del buffer[caret]
        elif event.kind == MOVE:
            target = event.payload
            if not isinstance(target, int) or not (0 <= target <= len(buffer)):
                raise ReplayError(index, f"cursor target {target!r} outside [0, {len(buffer)}]")
            caret = target
        elif event.kind == PAUSE:
            pass
        else:
            raise ReplayError(index, f"unknown event kind {event.kind!r}")
        if event.caret != caret:
            raise ReplayError(index, f"recorded caret {event.caret} != simulated {caret}")
    return "".join(buffer)


# --- trace (de)serialization ------------------------------------------------

SCHEMA_VERSION = 1


def _event_line(event: KeystrokeEvent) -> str:
    return json.dumps(
        {"t": event.t, "kind": event.kind, "payload": event.payload, "caret": event.caret},
        ensure_ascii=False,
        separators=(",", ":"),
    )


def trace_to_jsonl(trace: EventTrace) -> str:
    """Newline-delimited JSON: one header record, then one record per event."""
    header = {
        "schema_version": SCHEMA_VERSION,
        "seed": trace.seed,
        "final_text": trace.final_text,
        "temporal": asdict(trace.temporal),
        "editing": asdict(trace.editing),
        "stats": trace.stats,
    }
    lines = [json.dumps(header, ensure_ascii=False, separators=(",", ":"))]
    lines.extend(_event_line(event) for event in trace.events)
    return "\n".join(lines) + "\n"


def trace_from_jsonl(text: str) -> EventTrace:
    """Parse a serialized trace. Re-timing metadata is not persisted, so
    parsed traces replay but cannot be re-paced."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValidationError("empty trace file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ValidationError(f"bad trace header: {exc}") from exc
    if "schema_version" not in header:
        raise ValidationError("trace file missing header record")
    events = []
    for index, line in enumerate(lines[1:]):
        try:
            raw = json.loads(line)
            events.append(
                KeystrokeEvent(t=raw["t"], kind=raw["kind"], payload=raw["payload"], caret=raw["caret"])
            )
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ReplayError(index, f"unparseable event record: {exc}") from exc
    return EventTrace(
        events=tuple(events),
        seed=header.get("seed", 0),
        temporal=TemporalParameters(**header.get("temporal", {})),
        editing=EditingParameters(**header.get("editing", {})),
        final_text=header.get("final_text", ""),
        stats=dict(header.get("stats", {})),
    )
