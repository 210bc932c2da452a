"""Exact continued fractions of quadratic surds ``(sqrt(D) + P) / Q``.

Everything here runs on Python integers. The one exception is
:func:`sqrt_cf` for ``D < 2**62``, which delegates the period walk to the
int64 kernels in :mod:`pscf.kernels` (compiled by numba unless disabled).

Convergent conventions are fixed:

* full expansion ``[a0; a1, ...]``: ``p_{-1}=1, q_{-1}=0, p_0=a0, q_0=1``;
* tail ``[a1, ..., ai]``: ``p'_0=1, q'_0=0`` and ``p'_{-1}=0, q'_{-1}=1``, so
  ``p'_1 = a1``, ``q'_1 = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import chain, islice, repeat
from typing import Iterator, List, Sequence, Tuple

from . import kernels
from .errors import NonPositiveTail, PerfectSquare, StepBudgetExceeded

DEFAULT_MAX_STEPS = 10**6


def isqrt(n: int) -> int:
    if n < 0:
        raise ValueError("isqrt of a negative number")
    return math.isqrt(n)


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def sign_of(a, d: int, b) -> int:
    """Exact sign of ``a*sqrt(d) + b`` for rationals a, b and integer d >= 0."""
    a, b = Fraction(a), Fraction(b)
    sa = (a > 0) - (a < 0) if d else 0
    sb = (b > 0) - (b < 0)
    if sa == 0 or sa == sb:
        return sb if sa == 0 else sa
    if sb == 0:
        return sa
    lhs, rhs = a * a * d, b * b
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


@dataclass(frozen=True)
class QuadSurd:
    """The number ``(sqrt(D) + P) / Q`` with ``Q | D - P**2``."""

    P: int
    Q: int
    D: int

    def __post_init__(self):
        if self.Q == 0:
            raise ZeroDivisionError("QuadSurd with Q = 0")
        if self.D <= 0 or is_square(self.D):
            raise PerfectSquare(f"D={self.D} must be a positive nonsquare")
        if (self.D - self.P * self.P) % self.Q:
            raise ValueError("Q must divide D - P^2; build with QuadSurd.of()")

    @classmethod
    def of(cls, P: int, Q: int, D: int) -> "QuadSurd":
        """Build the surd, rescaling to (P|Q|, Q|Q|, D Q^2) when Q does not divide D - P^2."""
        if Q != 0 and (D - P * P) % Q:
            P, Q, D = P * abs(Q), Q * abs(Q), D * Q * Q
        return cls(P, Q, D)

    def floor(self) -> int:
        return surd_floor(self)

    def __float__(self):
        return (math.sqrt(self.D) + self.P) / self.Q

    def __str__(self):
        return f"(sqrt({self.D}) + {self.P})/{self.Q}"


@dataclass(frozen=True)
class CFExpansion:
    a0: int
    preperiod: Tuple[int, ...]
    period: Tuple[int, ...]

    @property
    def R(self) -> int:
        return len(self.period)

    def quotients(self) -> Iterator[int]:
        """a0, a1, a2, ... (infinite when the period is nonempty)."""
        per = chain.from_iterable(repeat(self.period)) if self.period else ()
        return chain((self.a0,), self.preperiod, per)

    def __getitem__(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        if i == 0:
            return self.a0
        i -= 1
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def __str__(self):
        pre = ", ".join(map(str, self.preperiod))
        per = ", ".join(map(str, self.period))
        return f"[{self.a0}; {pre} | {per}]" if pre else f"[{self.a0}; | {per}]"


def _floor_pq(P: int, Q: int, s: int) -> int:
    # floor((P + sqrt(D)) / Q) given s = isqrt(D), D nonsquare
    if Q > 0:
        return (P + s) // Q
    return -((P + s) // -Q) - 1


def surd_floor(x: QuadSurd) -> int:
    return _floor_pq(x.P, x.Q, isqrt(x.D))


def sqrt_cf(D: int, max_steps: int = DEFAULT_MAX_STEPS, use_kernel: bool = True) -> CFExpansion:
    """Continued fraction of sqrt(D); the period closes with 2*a0.

    The PQa state returns to its first post-a0 value exactly when Q = 1 again,
    so for pure square roots the repetition test reduces to that check.
    """
    if D < 0:
        raise ValueError("D must be nonnegative")
    a0 = isqrt(D)
    if a0 * a0 == D:
        raise PerfectSquare(f"{D} is a perfect square")
    if use_kernel and D < kernels.INT64_LIMIT:
        res = kernels.sqrt_period64(D, max_steps)
        if res is None:
            raise StepBudgetExceeded(f"sqrt({D}): no period within {max_steps} steps")
        return CFExpansion(a0, (), tuple(res[1].tolist()))
    P, Q = a0, D - a0 * a0
    period = []
    for _ in range(max_steps):
        a = (a0 + P) // Q
        period.append(a)
        if Q == 1:
            return CFExpansion(a0, (), tuple(period))
        P = a * Q - P
        Q = (D - P * P) // Q
    raise StepBudgetExceeded(f"sqrt({D}): no period within {max_steps} steps")


def surd_cf(x: QuadSurd, max_steps: int = DEFAULT_MAX_STEPS) -> CFExpansion:
    """Eventually periodic expansion of a quadratic surd via (P, Q) state repetition."""
    P, Q, D = x.P, x.Q, x.D
    s = isqrt(D)
    quotients = []
    seen = {}
    for i in range(max_steps + 1):
        if i > 0:
            state = (P, Q)
            if state in seen:
                j = seen[state]
                return CFExpansion(quotients[0], tuple(quotients[1:j]), tuple(quotients[j:]))
            seen[state] = i
        a = _floor_pq(P, Q, s)
        quotients.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    raise StepBudgetExceeded(f"{x}: no repeated state within {max_steps} steps")


def convergents(cf: CFExpansion, k: int) -> List[Tuple[int, int]]:
    if k < 1:
        raise ValueError("k must be >= 1")
    p0, q0, p1, q1 = 1, 0, 0, 1  # (p_{-1}, q_{-1}), (p_{-2}, q_{-2})
    out = []
    for a in islice(cf.quotients(), k):
        p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
        out.append((p0, q0))
    return out


def tail_convergents(quots: Sequence[int]) -> Tuple[List[int], List[int]]:
    """p'_0..p'_L and q'_0..q'_L for [a1, ..., aL] with seeds p'_0=1, q'_0=0."""
    ps, qs = [1], [0]
    pm, qm = 0, 1
    for a in quots:
        p, q = a * ps[-1] + pm, a * qs[-1] + qm
        pm, qm = ps[-1], qs[-1]
        ps.append(p)
        qs.append(q)
    return ps, qs


def tail_matrix(quots: Sequence[int]) -> Tuple[int, int, int, int]:
    """(p'_L, p'_{L-1}, q'_L, q'_{L-1}) for [a1, ..., aL] as a balanced product of 2x2 matrices.

    Same numbers as :func:`tail_convergents`, but the product tree keeps the
    big-integer work near-linear for periods with tens of thousands of terms.
    """
    def prod(lo, hi):
        if hi - lo == 1:
            return quots[lo], 1, 1, 0
        mid = (lo + hi) // 2
        a, b, c, d = prod(lo, mid)
        e, f, g, h = prod(mid, hi)
        return a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h

    if not quots:
        return 1, 0, 0, 1
    return prod(0, len(quots))


def tail_quadratic(period: Sequence[int]) -> Tuple[int, int, int]:
    """(A, B, C) with A*x^2 + B*x + C = 0 for x = [period repeated]."""
    if not period:
        raise ValueError("period must be nonempty")
    pR, pR1, qR, qR1 = tail_matrix(period)
    return qR, qR1 - pR, -pR1


def trace_identity_check(a0: int, period: Sequence[int]) -> bool:
    """Check ``2*a0 == (p'_R - q'_{R-1}) / p'_{R-1}`` exactly.

    Follows from summing the reciprocals of the two roots of the tail
    quadratic, which are sqrt(D) - a0 and -sqrt(D) - a0.
    """
    if not period:
        return False
    pR, pR1, _, qR1 = tail_matrix(period)
    return pR1 != 0 and pR - qR1 == 2 * a0 * pR1


def surd_reciprocal_tail(D: int, p: int, q: int) -> QuadSurd:
    """The surd ``|sqrt(D) - p/q|**-1``, requiring p/q < sqrt(D)."""
    if q <= 0:
        raise ValueError("q must be positive")
    if p >= 0 and p * p >= q * q * D:
        raise NonPositiveTail(f"{p}/{q} >= sqrt({D})")
    return QuadSurd.of(p * q, q * q * D - p * p, q**4 * D)


def reciprocal_distance(D: int, p: int, q: int) -> QuadSurd:
    """``|sqrt(D) - p/q|**-1`` for p/q on either side of sqrt(D)."""
    if p >= 0 and p * p > q * q * D:
        return QuadSurd.of(p * q, p * p - q * q * D, q**4 * D)
    return surd_reciprocal_tail(D, p, q)


def complete_quotient(D: int, h: int) -> QuadSurd:
    """x_h with sqrt(D) = [a0; a1, ..., a_{h-1}, x_h]; its expansion is the h-shifted tail."""
    a0 = isqrt(D)
    if a0 * a0 == D:
        raise PerfectSquare(f"{D} is a perfect square")
    P, Q = 0, 1
    for _ in range(h):
        a = (a0 + P) // Q
        P = a * Q - P
        Q = (D - P * P) // Q
    return QuadSurd(P, Q, D)


def quality_bound_check(D: int, cf: CFExpansion, i: int) -> bool:
    """Exact test of ``|sqrt(D) - p_i/q_i| < 1 / (a_{i+1} q_i^2)``."""
    p, q = convergents(cf, i + 1)[i]
    x = Fraction(p, q)
    b = Fraction(1, cf[i + 1] * q * q)
    upper = x + b > 0 and (x + b) ** 2 > D
    lower = x - b < 0 or (x - b) ** 2 < D
    return upper and lower
