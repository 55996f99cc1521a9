"""Injectable clocks so runs can be replayed byte-for-byte.

Every timestamp and duration in the engine comes from a Clock instance;
nothing calls datetime.now() directly.
"""

from __future__ import annotations

from datetime import datetime, timedelta


class SystemClock:
    def now(self) -> datetime:
        return datetime.now()


class TickClock:
    """Deterministic clock: starts at `start` and advances `step` per call."""

    def __init__(self, start: datetime | None = None, step_seconds: float = 1.0):
        self._current = start or datetime(2025, 11, 13, 21, 40, 0)
        self._step = timedelta(seconds=step_seconds)

    def now(self) -> datetime:
        stamp = self._current
        self._current = self._current + self._step
        return stamp
