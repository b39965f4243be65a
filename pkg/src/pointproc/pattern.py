"""Point patterns, observation windows and history prefixes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DuplicateTime, MixedMarks, NonFiniteValue, OutOfWindow, PatternError


class UnsortedTimes(PatternError):
    pass


@dataclass(frozen=True)
class Event:
    time: float
    mark: Optional[float] = None


@dataclass(frozen=True)
class ObservationWindow:
    """The interval [0, t_end)."""

    t_end: float

    def __post_init__(self):
        if not math.isfinite(self.t_end) or self.t_end <= 0:
            raise NonFiniteValue(f"window end must be finite and > 0, got {self.t_end!r}")

    @property
    def t_start(self) -> float:
        return 0.0


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class HistoryView:
    """Read-only record of the events strictly before some time.

    ``marks`` is None for unmarked histories.
    """

    times: np.ndarray
    marks: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "times", _frozen(self.times))
        if self.marks is not None:
            object.__setattr__(self, "marks", _frozen(self.marks))
            if len(self.marks) != len(self.times):
                raise MixedMarks("marks and times differ in length")

    def __len__(self):
        return len(self.times)

    @property
    def marked(self) -> bool:
        return self.marks is not None

    def before(self, t: float) -> "HistoryView":
        k = int(np.searchsorted(self.times, t, side="left"))
        if k == len(self.times):
            return self
        return HistoryView(self.times[:k], None if self.marks is None else self.marks[:k])


EMPTY_HISTORY = HistoryView(np.empty(0))


@dataclass(frozen=True, eq=False)
class PointPattern:
    """Simple point pattern on [0, t_end), optionally marked."""

    times: np.ndarray
    t_end: float
    marks: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "times", _frozen(self.times))
        object.__setattr__(self, "t_end", float(self.t_end))
        if self.marks is not None:
            object.__setattr__(self, "marks", _frozen(self.marks))

    def __len__(self):
        return len(self.times)

    def __eq__(self, other):
        if not isinstance(other, PointPattern):
            return NotImplemented
        if self.t_end != other.t_end or self.marked != other.marked:
            return False
        if not np.array_equal(self.times, other.times):
            return False
        return not self.marked or np.array_equal(self.marks, other.marks)

    @property
    def marked(self) -> bool:
        return self.marks is not None

    @property
    def window(self) -> ObservationWindow:
        return ObservationWindow(self.t_end)

    @property
    def events(self) -> list[Event]:
        if self.marks is None:
            return [Event(float(t)) for t in self.times]
        return [Event(float(t), float(k)) for t, k in zip(self.times, self.marks)]

    def history(self, t: Optional[float] = None) -> HistoryView:
        """Events strictly before ``t`` (all events when ``t`` is None)."""
        h = HistoryView(self.times, self.marks)
        return h if t is None else h.before(t)


def as_history(obj) -> HistoryView:
    """Coerce a pattern, a list of times or a list of (time, mark) pairs."""
    if obj is None:
        return EMPTY_HISTORY
    if isinstance(obj, HistoryView):
        return obj
    if isinstance(obj, PointPattern):
        return obj.history()
    items = list(obj)
    if not items:
        return EMPTY_HISTORY
    if isinstance(items[0], Event):
        items = [(e.time, e.mark) for e in items]
    if isinstance(items[0], (tuple, list)):
        times = [float(it[0]) for it in items]
        marks = [it[1] if len(it) > 1 else None for it in items]
        if all(m is None for m in marks):
            return HistoryView(times)
        if any(m is None for m in marks):
            raise MixedMarks("some history events carry marks and some do not")
        return HistoryView(times, [float(m) for m in marks])
    return HistoryView([float(t) for t in items])


def validate_pattern(raw_events: Iterable, window, marked: Optional[bool] = None) -> PointPattern:
    """Build a PointPattern, enforcing simplicity, ordering and window bounds.

    ``raw_events`` holds bare times or ``(time, mark)`` pairs with ``mark``
    possibly None. ``window`` is an ObservationWindow or the window end T.
    ``marked`` forces the marking flag, which matters for empty patterns.
    """
    if not isinstance(window, ObservationWindow):
        window = ObservationWindow(float(window))
    T = window.t_end

    times: list[float] = []
    marks: list[Optional[float]] = []
    for raw in raw_events:
        if isinstance(raw, Event):
            t, k = raw.time, raw.mark
        elif isinstance(raw, (tuple, list)):
            t = raw[0]
            k = raw[1] if len(raw) > 1 else None
        else:
            t, k = raw, None
        t = float(t)
        if not math.isfinite(t):
            raise NonFiniteValue(f"event time {t!r} is not finite")
        if k is not None:
            k = float(k)
            if not math.isfinite(k):
                raise NonFiniteValue(f"mark {k!r} is not finite")
            if k < 0:
                raise PatternError(f"mark {k!r} is negative")
        times.append(t)
        marks.append(k)

    n_marked = sum(k is not None for k in marks)
    if 0 < n_marked < len(marks):
        raise MixedMarks("some events carry marks and some do not")
    is_marked = n_marked > 0 if marked is None else bool(marked)
    if marks and is_marked != (n_marked > 0):
        raise MixedMarks(f"expected {'marked' if is_marked else 'unmarked'} events")

    for i, t in enumerate(times):
        if t < 0 or t >= T:
            raise OutOfWindow(f"event time {t!r} outside [0, {T!r})")
        if i:
            if t == times[i - 1]:
                raise DuplicateTime(f"two events at time {t!r}")
            if t < times[i - 1]:
                raise UnsortedTimes(f"event time {t!r} precedes {times[i - 1]!r}")

    return PointPattern(times, T, marks if is_marked else None)
