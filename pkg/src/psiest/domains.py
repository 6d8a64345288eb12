"""Real intervals: the open parameter domain and general observation sets."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

INF = math.inf


@dataclass(frozen=True)
class Interval:
    """A real interval with independently open or closed ends.

    An empty interval is represented with ``empty=True``; its bounds are
    then meaningless.
    """

    lo: float = -INF
    hi: float = INF
    lo_closed: bool = False
    hi_closed: bool = False
    empty: bool = False

    @classmethod
    def open(cls, lo: float, hi: float) -> "Interval":
        return cls(lo, hi)

    @classmethod
    def closed(cls, lo: float, hi: float) -> "Interval":
        return cls(lo, hi, math.isfinite(lo), math.isfinite(hi))

    @classmethod
    def nothing(cls) -> "Interval":
        return cls(0.0, 0.0, empty=True)

    def __contains__(self, x: float) -> bool:
        if self.empty or math.isnan(x):
            return False
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return above and below

    @property
    def is_bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def __str__(self) -> str:
        if self.empty:
            return "{}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{_fmt(self.lo)}, {_fmt(self.hi)}{right}"


REALS = Interval()
POSITIVE = Interval(0.0, INF)
UNIT_OPEN = Interval(0.0, 1.0)


def _fmt(v: float) -> str:
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return repr(v)


@dataclass(frozen=True)
class ParameterDomain:
    """Nondegenerate open interval ``(lo, hi)``; the endpoints are never estimates."""

    lo: float = -INF
    hi: float = INF

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi) or not self.lo < self.hi:
            raise DomainError(f"degenerate parameter domain ({self.lo}, {self.hi})")

    def __contains__(self, t: float) -> bool:
        return self.lo < t < self.hi

    def reference_point(self) -> float:
        """Starting point of the bracket search when no guess is supplied."""
        lo, hi = self.lo, self.hi
        if math.isfinite(lo) and math.isfinite(hi):
            return lo + (hi - lo) / 2
        if lo < 0.0 < hi:
            return 0.0
        if math.isfinite(lo):
            return lo + 1.0
        return hi - 1.0

    def as_interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    def __str__(self) -> str:
        return str(self.as_interval())


REAL_LINE = ParameterDomain()
POSITIVE_HALF_LINE = ParameterDomain(0.0, INF)
