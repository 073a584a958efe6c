"""Objective interaction metrics over conversation logs.

Counts are recomputed from the stored message text with the segmenter
(so they can be cross-checked against what the gateway recorded), then
aggregated per agent preset, plus an ordinary least squares fit of user
word count against agent word count.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ValidationError
from .segmenter import segment

METRICS = ("user_words", "user_sentences", "agent_words", "agent_sentences", "duration_s")


@dataclass(frozen=True)
class RegressionFit:
    slope: float
    intercept: float
    r_squared: float
    n: int

    def predict(self, x: float) -> float:
        return self.slope * x + self.intercept


def fit_regression(points: Sequence[tuple[float, float]]) -> RegressionFit:
    """Closed-form ordinary least squares of y on x.

    Raises ValidationError for fewer than two points or identical x
    values. Constant y yields slope 0 and r_squared 0.
    """
    n = len(points)
    if n < 2:
        raise ValidationError(f"regression needs at least 2 points, got {n}")
    xs = [float(x) for x, _ in points]
    ys = [float(y) for _, y in points]
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    if sxx == 0.0:
        raise ValidationError("regression is degenerate: all x values identical")
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - mean_y) ** 2 for y in ys)
    if ss_tot > 0.0:
        r_squared = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    else:
        r_squared = 0.0
    return RegressionFit(slope=slope, intercept=intercept, r_squared=r_squared, n=n)


@dataclass(frozen=True)
class SessionStats:
    session_id: str
    preset: str
    user_words: int
    user_sentences: int
    agent_words: int
    agent_sentences: int
    duration_s: float


def session_stats(records: Iterable[dict]) -> list[SessionStats]:
    """Collapse raw log records into one stats row per session."""
    messages: dict[str, list[dict]] = {}
    summaries: dict[str, dict] = {}
    order: list[str] = []
    for record in records:
        sid = record.get("session_id", "")
        if record.get("record") == "message":
            if sid not in messages:
                messages[sid] = []
                order.append(sid)
            messages[sid].append(record)
        elif record.get("record") == "session":
            summaries[sid] = record
            if sid not in messages:
                messages[sid] = []
                order.append(sid)

    rows = []
    for sid in order:
        counts = {"user": [0, 0], "agent": [0, 0]}
        preset = summaries.get(sid, {}).get("preset", "")
        first_sent = None
        last_done = None
        for msg in messages[sid]:
            preset = msg.get("preset", preset) or preset
            structure = segment(msg.get("text", ""))
            side = counts.get(msg.get("sender", ""), None)
            if side is None:
                continue
            side[0] += structure.word_count
            side[1] += structure.sentence_count
            if msg.get("sender") == "user":
                sent = msg.get("sent_at_ms")
                if sent is not None and (first_sent is None or sent < first_sent):
                    first_sent = sent
            else:
                done = msg.get("completed_at_ms")
                if done is not None and (last_done is None or done > last_done):
                    last_done = done
        if sid in summaries:
            duration = float(summaries[sid].get("duration_s", 0.0))
        elif first_sent is not None and last_done is not None:
            duration = max(0.0, (last_done - first_sent) / 1000.0)
        else:
            duration = 0.0
        rows.append(
            SessionStats(
                session_id=sid,
                preset=preset,
                user_words=counts["user"][0],
                user_sentences=counts["user"][1],
                agent_words=counts["agent"][0],
                agent_sentences=counts["agent"][1],
                duration_s=duration,
            )
        )
    return rows


def _mean_std(values: Sequence[float]) -> tuple[float, float]:
    if not values:
        return 0.0, 0.0
    mean = sum(values) / len(values)
    std = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, std


def conversation_stats(records: Iterable[dict]) -> dict[str, dict]:
    """Per-preset aggregation: mean and std of each metric over sessions."""
    rows = session_stats(records)
    by_preset: dict[str, list[SessionStats]] = {}
    for row in rows:
        by_preset.setdefault(row.preset, []).append(row)
    report = {}
    for preset_name in sorted(by_preset):
        group = by_preset[preset_name]
        metrics = {}
        for metric in METRICS:
            mean, std = _mean_std([float(getattr(row, metric)) for row in group])
            metrics[metric] = {"mean": mean, "std": std}
        report[preset_name] = {"sessions": len(group), "metrics": metrics}
    return report


def regression_points(records: Iterable[dict]) -> list[tuple[float, float]]:
    """(agent words, user words) per session, for the exchange-volume regression."""
    return [(float(r.agent_words), float(r.user_words)) for r in session_stats(records)]


def analyze(records: Iterable[dict]) -> dict:
    """Full JSON-able report: per-preset stats plus the word-count regression."""
    rows = list(records)
    report: dict = {"presets": conversation_stats(rows)}
    points = regression_points(rows)
    try:
        fit = fit_regression(points)
        report["word_count_regression"] = {
            "slope": fit.slope,
            "intercept": fit.intercept,
            "r_squared": fit.r_squared,
            "n": fit.n,
        }
    except ValidationError as exc:
        report["word_count_regression"] = {"error": str(exc)}
    return report


def write_points_csv(points: Sequence[tuple[float, float]], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["agent_words", "user_words"])
        writer.writerows(points)
