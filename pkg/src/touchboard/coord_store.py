"""Bounded register file for committed samples, fanning the newest one out."""

from __future__ import annotations

from collections import deque

from .touch_path import TouchSample

DEFAULT_CAPACITY = 1024


class StaleSample(ValueError):
    """A write arrived with a sequence number at or behind the stored latest."""


class CoordRegisterFile:
    """Ring of recent samples; one writer appends, readers see the latest snapshot."""

    def __init__(self, capacity: int = DEFAULT_CAPACITY) -> None:
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._entries: deque[TouchSample] = deque(maxlen=capacity)

    def __len__(self) -> int:
        return len(self._entries)

    def write_sample(self, s: TouchSample) -> None:
        latest = self.read_latest()
        if latest is not None and s.seq <= latest.seq:
            raise StaleSample(f"seq {s.seq} not after stored seq {latest.seq}")
        self._entries.append(s)

    def read_latest(self) -> TouchSample | None:
        return self._entries[-1] if self._entries else None

    def entries(self) -> tuple[TouchSample, ...]:
        """Snapshot of the ring, oldest first."""
        return tuple(self._entries)

    def reset(self) -> None:
        self._entries.clear()
