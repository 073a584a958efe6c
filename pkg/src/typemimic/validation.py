"""Trace validation: replay soundness plus statistical fidelity.

Checks a corpus of serialized traces against the pace/editing
configuration they claim (or an operator-supplied override): every
trace must replay to its final text with monotone timestamps; observed
delay distributions, pause rates, and word-action rates must sit within
the tolerance bands pinned below.

The word-action rate check assumes detours were sourceable (synonym
misses and untypoable words drop actions and push the observed rate
down); drive it with delete/insert rates or thesaurus-covered text for
exact bands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ReplayError
from .scheduling import DELETE, MOVE, PAUSE, TYPE, EventTrace, apply_trace
from .segmenter import segment

# tolerance constants: relative bands widen to 5 standard errors for
# small samples; exact (1e-6) when the configured std is zero
MEAN_REL_TOL = 0.02
STD_REL_TOL = 0.05
EXACT_TOL = 1e-6
MIN_SAMPLES = 30


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _mean_std(values: list[float]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / (n - 1) if n > 1 else 0.0
    return mean, math.sqrt(var)


def _band_check(name: str, observed: float, expected: float, tolerance: float) -> CheckResult:
    passed = abs(observed - expected) <= tolerance
    return CheckResult(
        name,
        passed,
        f"observed {observed:.4f} vs expected {expected:.4f} (tolerance {tolerance:.4f})",
    )


def validate_trace(trace: EventTrace) -> list[CheckResult]:
    """Structural checks for one trace: replay and timestamp order."""
    results = []
    try:
        replayed = apply_trace(trace.events)
        ok = replayed == trace.final_text
        detail = "replays to final text" if ok else "replayed text differs from final text"
    except ReplayError as exc:
        ok, detail = False, str(exc)
    results.append(CheckResult("eventual-text", ok, detail))

    monotone = all(
        trace.events[i].t <= trace.events[i + 1].t for i in range(len(trace.events) - 1)
    )
    results.append(
        CheckResult("monotone-timestamps", monotone, f"{len(trace.events)} events")
    )
    return results


def _char_gaps(trace: EventTrace) -> list[float]:
    gaps = []
    events = trace.events
    for i in range(1, len(events)):
        prev, cur = events[i - 1], events[i]
        if (
            prev.kind == TYPE
            and cur.kind == TYPE
            and isinstance(prev.payload, str)
            and isinstance(cur.payload, str)
            and not prev.payload.isspace()
            and not cur.payload.isspace()
        ):
            gaps.append(cur.t - prev.t)
    return gaps


def validate_corpus(
    traces: list[EventTrace],
    temporal=None,
    editing=None,
) -> list[CheckResult]:
    """Aggregate statistical checks; configuration defaults to the first
    trace's own snapshot."""
    results: list[CheckResult] = []
    for index, trace in enumerate(traces):
        for check in validate_trace(trace):
            if not check.passed:
                results.append(
                    CheckResult(f"trace[{index}].{check.name}", False, check.detail)
                )
    if not traces:
        return [CheckResult("corpus", False, "no traces to validate")]
    results.append(CheckResult("structural", True, f"{len(traces)} traces replayed"))

    temporal = temporal if temporal is not None else traces[0].temporal
    editing = editing if editing is not None else traces[0].editing

    # character pace from intra-word gaps (pure char-pace draws)
    gaps: list[float] = []
    for trace in traces:
        gaps.extend(_char_gaps(trace))
    if len(gaps) >= MIN_SAMPLES:
        mean, std = _mean_std(gaps)
        cfg_mean, cfg_std = temporal.char_pace_mean_ms, temporal.char_pace_std_ms
        if cfg_std == 0.0:
            results.append(_band_check("char-pace-mean", mean, cfg_mean, EXACT_TOL))
            results.append(_band_check("char-pace-std", std, 0.0, EXACT_TOL))
        else:
            tol = max(MEAN_REL_TOL * cfg_mean, 5.0 * cfg_std / math.sqrt(len(gaps)))
            results.append(_band_check("char-pace-mean", mean, cfg_mean, tol))
            tol = max(STD_REL_TOL * cfg_std, 5.0 * cfg_std / math.sqrt(2 * len(gaps)))
            results.append(_band_check("char-pace-std", std, cfg_std, tol))

    # thinking-pause durations
    durations = [
        float(ev.payload)
        for trace in traces
        for ev in trace.events
        if ev.kind == PAUSE and isinstance(ev.payload, (int, float))
    ]
    if len(durations) >= MIN_SAMPLES:
        mean, _ = _mean_std(durations)
        cfg_mean = temporal.thinking_mean_s * 1000.0
        cfg_std = temporal.thinking_std_s * 1000.0
        if cfg_std == 0.0:
            results.append(_band_check("thinking-mean", mean, cfg_mean, EXACT_TOL))
        else:
            tol = max(MEAN_REL_TOL * cfg_mean, 5.0 * cfg_std / math.sqrt(len(durations)))
            results.append(_band_check("thinking-mean", mean, cfg_mean, tol))

    # pause rate against recorded word starts (3 binomial sigma)
    word_starts = sum(t.stats.get("word_starts", 0) for t in traces)
    pauses = sum(t.stats.get("pauses", 0) for t in traces)
    if word_starts > 0:
        p = temporal.pause_rate
        if p == 0.0:
            results.append(
                CheckResult("pause-rate", pauses == 0, f"{pauses} pauses at rate 0")
            )
        else:
            sigma = math.sqrt(word_starts * p * (1.0 - p))
            tol = 3.0 * sigma + 1.0
            results.append(_band_check("pause-rate", float(pauses), word_starts * p, tol))

    # word-targeted action counts vs configured rates
    word_total = (
        editing.word_deletion_rate + editing.word_insertion_rate + editing.word_modification_rate
    )
    if word_total > 0.0:
        observed = 0
        expected = 0.0
        variance = 0.0
        rate_initial = editing.word_insertion_rate  # initial words only take inserts
        for trace in traces:
            observed += sum(
                count for key, count in trace.stats.items() if key.startswith("action:word:")
            )
            structure = segment(trace.final_text)
            initials = sum(1 for w in structure.words if w.sentence_initial)
            plain = structure.word_count - initials
            for count, rate in ((plain, word_total), (initials, rate_initial)):
                expected += count * rate
                variance += count * rate * (1.0 - rate)
        tol = 3.0 * math.sqrt(variance) + 1.0
        results.append(_band_check("word-action-rate", float(observed), expected, tol))

    # zero-variance, edit-free configs have a closed-form total duration
    stds = (
        temporal.char_pace_std_ms,
        temporal.space_lag_std_ms,
        temporal.deletion_pace_std_ms,
        temporal.cursor_pace_std_ms,
        temporal.thinking_std_s,
    )
    editing_active = any(
        rate > 0.0 for level in ("paragraph", "sentence", "word", "character")
        for rate in editing.level_rates(level)
    )
    if all(s == 0.0 for s in stds) and not editing_active and temporal.pause_rate == 0.0:
        for index, trace in enumerate(traces):
            structure = segment(trace.final_text)
            expected = (
                len(trace.final_text) * temporal.char_pace_mean_ms
                + structure.word_count * temporal.space_lag_mean_ms
            )
            if abs(trace.duration_ms - expected) > EXACT_TOL:
                results.append(
                    _band_check(f"trace[{index}].closed-form-duration",
                                trace.duration_ms, expected, EXACT_TOL)
                )
        results.append(CheckResult("closed-form-duration", True, "exact duration checks ran"))

    return results


def summarize(results: list[CheckResult]) -> dict:
    failed = [r for r in results if not r.passed]
    return {
        "passed": not failed,
        "checks": [r.as_dict() for r in results],
        "failures": len(failed),
    }
