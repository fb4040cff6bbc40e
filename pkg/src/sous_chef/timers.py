"""Cooking timers with pause/resume and one-shot expiry.

Remaining time is recomputed from a monotonic clock on every poll, so it
never goes backwards while running and freezes exactly while paused. The
running-to-expired transition fires once; an expired timer stays expired.
"""

from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Optional

from .model import new_id, now_utc


class TimerState(str, Enum):
    RUNNING = "running"
    PAUSED = "paused"
    EXPIRED = "expired"


class TimerNotFound(KeyError):
    def __init__(self, timer_id: str):
        super().__init__(timer_id)
        self.timer_id = timer_id

    def __str__(self):
        return f"no timer with id {self.timer_id!r}"


class TimerStateError(ValueError):
    pass


@dataclass
class Timer:
    id: str
    label: str
    duration_s: int
    started_at: datetime
    state: TimerState
    remaining_s: int

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "label": self.label,
            "duration_s": self.duration_s,
            "started_at": self.started_at.isoformat(),
            "state": self.state.value,
            "remaining_s": self.remaining_s,
        }


class _Entry:
    __slots__ = ("timer", "deadline", "expired_fired")

    def __init__(self, timer: Timer, deadline: Optional[float]):
        self.timer = timer
        self.deadline = deadline  # monotonic seconds; None while paused/expired
        self.expired_fired = False


class TimerBank:
    """All timers for one service process. ``clock`` is injectable for tests."""

    def __init__(self, clock=time.monotonic):
        self._clock = clock
        self._entries: dict = {}
        self._lock = threading.Lock()

    def create(self, label: str, duration_s: int) -> Timer:
        if duration_s <= 0:
            raise ValueError("timer duration must be positive")
        timer = Timer(
            id=new_id(),
            label=label,
            duration_s=duration_s,
            started_at=now_utc(),
            state=TimerState.RUNNING,
            remaining_s=duration_s,
        )
        with self._lock:
            self._entries[timer.id] = _Entry(timer, self._clock() + duration_s)
        return timer

    def _get(self, timer_id: str) -> _Entry:
        try:
            return self._entries[timer_id]
        except KeyError:
            raise TimerNotFound(timer_id) from None

    def _refresh_locked(self, entry: _Entry) -> None:
        timer = entry.timer
        if timer.state is not TimerState.RUNNING:
            return
        remaining = entry.deadline - self._clock()
        if remaining <= 0:
            if not entry.expired_fired:
                entry.expired_fired = True
                timer.state = TimerState.EXPIRED
                timer.remaining_s = 0
                entry.deadline = None
        else:
            timer.remaining_s = int(math.ceil(remaining))

    def poll(self, timer_id: str) -> Timer:
        with self._lock:
            entry = self._get(timer_id)
            self._refresh_locked(entry)
            return entry.timer

    def pause(self, timer_id: str) -> Timer:
        with self._lock:
            entry = self._get(timer_id)
            self._refresh_locked(entry)
            timer = entry.timer
            if timer.state is not TimerState.RUNNING:
                raise TimerStateError(f"cannot pause a {timer.state.value} timer")
            timer.state = TimerState.PAUSED  # remaining_s frozen by the refresh above
            entry.deadline = None
            return timer

    def resume(self, timer_id: str) -> Timer:
        with self._lock:
            entry = self._get(timer_id)
            timer = entry.timer
            if timer.state is not TimerState.PAUSED:
                raise TimerStateError(f"cannot resume a {timer.state.value} timer")
            timer.state = TimerState.RUNNING
            entry.deadline = self._clock() + timer.remaining_s
            return timer

    def tick(self) -> None:
        """Scheduler hook: refresh all running timers so expiry is not poll-driven."""
        with self._lock:
            for entry in self._entries.values():
                self._refresh_locked(entry)
