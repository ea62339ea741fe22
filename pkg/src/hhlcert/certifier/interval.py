"""Outward-rounded interval arithmetic on binary64.

Each elementary operation widens its floating-point result by one ulp in the
outward direction (``math.nextafter``), except where the result is exact by
construction (a product with an exact zero, a zero sum).  ``sin`` and ``cos``
are enclosed by splitting the argument interval at the extrema of the
function; a small guard band makes the extremum test conservative.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

_INF = math.inf
# guard for locating extrema of sin/cos when comparing against multiples of pi
_EXTREMUM_GUARD = 1e-12


def _down(x: float) -> float:
    if x == 0.0 or math.isinf(x):
        return x
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    if x == 0.0 or math.isinf(x):
        return x
    return math.nextafter(x, _INF)


@dataclass(frozen=True, slots=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo <= self.hi):
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(float(x), float(x))

    @classmethod
    def hull(cls, *parts: "Interval") -> "Interval":
        return cls(min(p.lo for p in parts), max(p.hi for p in parts))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def intersect(self, lo: float, hi: float) -> "Interval | None":
        a, b = max(self.lo, lo), min(self.hi, hi)
        return Interval(a, b) if a <= b else None

    def __add__(self, other):
        o = _coerce(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = _coerce(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        o = _coerce(other)
        if (self.lo == self.hi == 0.0) or (o.lo == o.hi == 0.0):
            return Interval(0.0, 0.0)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(_down(min(prods)), _up(max(prods)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o.contains_zero():
            return Interval(-_INF, _INF)
        if self.lo == self.hi == 0.0:
            return Interval(0.0, 0.0)
        quots = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Interval(_down(min(quots)), _up(max(quots)))

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def sqr(self) -> "Interval":
        if self.lo == self.hi == 0.0:
            return Interval(0.0, 0.0)
        a, b = abs(self.lo), abs(self.hi)
        if self.contains_zero():
            return Interval(0.0, _up(max(a, b) ** 2))
        lo, hi = min(a, b), max(a, b)
        return Interval(max(0.0, _down(lo * lo)), _up(hi * hi))

    def abs(self) -> "Interval":
        if self.contains_zero():
            return Interval(0.0, self.mag())
        return Interval(min(abs(self.lo), abs(self.hi)), self.mag())

    def __repr__(self):
        return f"[{self.lo!r}, {self.hi!r}]"


def _coerce(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(float(x))


PI = Interval(math.pi, _up(math.pi))  # math.pi < pi < nextafter(math.pi)
TWO_PI = PI * 2.0
HALF_PI = PI * 0.5


def _has_point(x: Interval, offset: float, period: float = 2.0 * math.pi) -> bool:
    """Conservatively test whether ``offset + period*k`` lies in ``x`` for some integer k."""
    k_lo = math.ceil((x.lo - offset) / period - _EXTREMUM_GUARD)
    k_hi = math.floor((x.hi - offset) / period + _EXTREMUM_GUARD)
    return k_lo <= k_hi


def _clamp_unit(lo: float, hi: float) -> Interval:
    return Interval(max(-1.0, lo), min(1.0, hi))


def sin(x: Interval) -> Interval:
    if x.width >= 2.0 * math.pi or math.isinf(x.width):
        return Interval(-1.0, 1.0)
    a, b = math.sin(x.lo), math.sin(x.hi)
    lo, hi = _down(min(a, b)), _up(max(a, b))
    if _has_point(x, 0.5 * math.pi):
        hi = 1.0
    if _has_point(x, -0.5 * math.pi):
        lo = -1.0
    return _clamp_unit(lo, hi)


def cos(x: Interval) -> Interval:
    if x.width >= 2.0 * math.pi or math.isinf(x.width):
        return Interval(-1.0, 1.0)
    a, b = math.cos(x.lo), math.cos(x.hi)
    lo, hi = _down(min(a, b)), _up(max(a, b))
    if _has_point(x, 0.0):
        hi = 1.0
    if _has_point(x, math.pi):
        lo = -1.0
    return _clamp_unit(lo, hi)


def sinc(x: Interval) -> Interval:
    """Enclosure of sin(t)/t (value 1 at t = 0) for |t| <= pi; wider arguments give [-1, 1]."""
    a = x.abs()
    if a.hi > 3.0:
        return Interval(-1.0, 1.0)

    def at(t: float, upper: bool) -> float:
        if t < 1e-4:
            # 1 - t^2/6 <= sinc(t) <= 1
            return 1.0 if upper else _down(1.0 - _up(t * t) / 6.0)
        e = sin(Interval.point(t)) / Interval.point(t)
        return e.hi if upper else e.lo

    # sinc is even and decreasing on [0, pi]
    return Interval(max(-1.0, at(a.hi, False)), min(1.0, at(a.lo, True)))
