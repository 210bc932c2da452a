"""Closed intervals with exact rational endpoints.

Only square roots are rounded: :func:`sqrt_interval` encloses sqrt(x) in a
dyadic interval of width ``2**-bits``. All other operations are exact, so an
enclosure's width is controlled entirely by the precision given to sqrt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        x = Fraction(x)
        return cls(x, x)

    @staticmethod
    def _lift(x):
        return x if isinstance(x, Interval) else Interval.point(x)

    def __add__(self, other):
        o = self._lift(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("divisor interval contains 0")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def __contains__(self, x):
        return self.lo <= x <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __float__(self):
        return float((self.lo + self.hi) / 2)


def sqrt_interval(x, bits: int) -> Interval:
    """Enclosure of sqrt(x), x >= 0 rational, with dyadic endpoints at 2**-bits."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("sqrt of a negative number")
    scale = 1 << (2 * bits)
    num, den = x.numerator * scale, x.denominator
    lo = math.isqrt(num // den)
    hi_sq = -(-num // den)
    hi = math.isqrt(hi_sq)
    if hi * hi < hi_sq:
        hi += 1
    return Interval(Fraction(lo, 1 << bits), Fraction(hi, 1 << bits))
