"""Wall-clock and virtual clocks.

Everything below the gateway works with virtual timestamps; only the
gateway converts trace time into actual waiting. Tests inject a
VirtualClock so nothing ever sleeps.
"""

from __future__ import annotations

import asyncio
import time
from typing import Protocol


class Clock(Protocol):
    def now_ms(self) -> float: ...

    async def sleep_ms(self, duration_ms: float) -> None: ...


class RealClock:
    def now_ms(self) -> float:
        return time.time() * 1000.0

    async def sleep_ms(self, duration_ms: float) -> None:
        if duration_ms > 0:
            await asyncio.sleep(duration_ms / 1000.0)


class VirtualClock:
    """Deterministic clock: sleeping advances time instantly."""

    def __init__(self, start_ms: float = 0.0):
        self._now = start_ms
        self.sleeps: list[float] = []

    def now_ms(self) -> float:
        return self._now

    async def sleep_ms(self, duration_ms: float) -> None:
        duration = max(0.0, duration_ms)
        self.sleeps.append(duration)
        self._now += duration
        await asyncio.sleep(0)  # yield so concurrent tasks interleave

    def advance(self, duration_ms: float) -> None:
        self._now += max(0.0, duration_ms)
