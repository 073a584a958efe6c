"""Durable conversation logs: JSON lines, one directory per day.

Writes are line-atomic (single write call per record, serialized by a
lock), so concurrent sessions interleave without corrupting records.
Word and sentence counts are computed with the segmenter at write time
and can be recomputed exactly from the stored text.
"""

from __future__ import annotations

import json
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator

from .clock import Clock, RealClock
from .segmenter import segment

SCHEMA_VERSION = 1


class LogStore:
    def __init__(self, base_dir: str | Path, clock: Clock | None = None):
        self.base_dir = Path(base_dir)
        self.clock = clock if clock is not None else RealClock()
        self._lock = threading.Lock()

    def _day_file(self) -> Path:
        stamp = datetime.fromtimestamp(self.clock.now_ms() / 1000.0, tz=timezone.utc)
        directory = self.base_dir / stamp.strftime("%Y-%m-%d")
        directory.mkdir(parents=True, exist_ok=True)
        return directory / "conversations.jsonl"

    def _write(self, record: dict) -> None:
        line = json.dumps(record, ensure_ascii=False, separators=(",", ":"))
        with self._lock:
            with open(self._day_file(), "a", encoding="utf-8") as handle:
                handle.write(line + "\n")

    def append_message(
        self,
        *,
        session_id: str,
        preset: str,
        sender: str,
        text: str,
        sent_at_ms: float,
        completed_at_ms: float,
        state: str = "complete",
    ) -> dict:
        structure = segment(text)
        record = {
            "schema_version": SCHEMA_VERSION,
            "record": "message",
            "session_id": session_id,
            "preset": preset,
            "sender": sender,
            "text": text,
            "words": structure.word_count,
            "sentences": structure.sentence_count,
            "sent_at_ms": sent_at_ms,
            "completed_at_ms": completed_at_ms,
            "state": state,
        }
        self._write(record)
        return record

    def append_session(
        self,
        *,
        session_id: str,
        preset: str,
        opened_at_ms: float,
        closed_at_ms: float,
        duration_s: float,
        completion: str = "complete",
    ) -> dict:
        record = {
            "schema_version": SCHEMA_VERSION,
            "record": "session",
            "session_id": session_id,
            "preset": preset,
            "opened_at_ms": opened_at_ms,
            "closed_at_ms": closed_at_ms,
            "duration_s": duration_s,
            "completion": completion,
        }
        self._write(record)
        return record


def read_records(path: str | Path) -> Iterator[dict]:
    """Yield every record under a log file or directory tree."""
    root = Path(path)
    files: Iterable[Path]
    if root.is_dir():
        files = sorted(root.rglob("*.jsonl"))
    elif root.exists():
        files = [root]
    else:
        files = []
    for file in files:
        with open(file, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    yield json.loads(line)
