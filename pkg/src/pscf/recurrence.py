"""Recover an integer-root power sum from consecutive exact samples.

Pipeline: minimal linear recurrence (Hankel rank over Q) -> distinct nonzero
integer roots of its characteristic polynomial -> coefficients from the
Vandermonde system -> exact check on held-out samples. No floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import (
    HoldoutMismatch,
    Inconsistent,
    NonIntegerCoefficient,
    NonIntegerRoot,
    NoRecurrence,
    RepeatedRoot,
    ZeroRoot,
)
from .powersum import PowerSum

Poly = Tuple[Fraction, ...]  # coefficients, highest degree first


@dataclass(frozen=True)
class SequenceSample:
    points: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        ms = [m for m, _ in self.points]
        if any(b != a + 1 for a, b in zip(ms, ms[1:])):
            raise ValueError("sample indices must be consecutive and increasing")

    @classmethod
    def from_values(cls, values: Sequence[int], start: int = 0) -> "SequenceSample":
        return cls(tuple((start + i, v) for i, v in enumerate(values)))

    @property
    def ms(self) -> List[int]:
        return [m for m, _ in self.points]

    @property
    def values(self) -> List[int]:
        return [v for _, v in self.points]

    def __len__(self):
        return len(self.points)

    def split(self, holdout: int):
        return SequenceSample(self.points[:-holdout]), SequenceSample(self.points[-holdout:])


# ------------------------------------------------------------ exact algebra

def _eliminate(rows: List[List[Fraction]], ncols: int):
    """In-place row reduction on the first ncols columns; returns pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return pivots


def rank(matrix: Sequence[Sequence]) -> int:
    rows = [[Fraction(x) for x in row] for row in matrix]
    return len(_eliminate(rows, len(rows[0]) if rows else 0))


def solve_exact(a: Sequence[Sequence], b: Sequence) -> Tuple[Optional[List[Fraction]], int]:
    """Solve a x = b over Q. Returns (solution or None if inconsistent/underdetermined, rank)."""
    n = len(a[0])
    rows = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    pivots = _eliminate(rows, n)
    k = len(pivots)
    if any(row[n] != 0 for row in rows[k:]):
        return None, k
    if k < n:
        return None, k
    return [rows[i][n] for i in range(n)], k


def _hankel(values, d):
    return [list(values[k:k + d]) for k in range(len(values) - d)], list(values[d:])


# ------------------------------------------------------------ polynomials

def _strip(p):
    p = list(p)
    while p and p[0] == 0:
        p.pop(0)
    return p


def _poly_rem(a, b):
    a = [Fraction(x) for x in _strip(a)]
    b = [Fraction(x) for x in _strip(b)]
    while len(a) >= len(b) and a:
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a = _strip(a)
    return a


def _poly_gcd_degree(a, b) -> int:
    a, b = _strip(a), _strip(b)
    while b:
        a, b = b, _poly_rem(a, b)
    return len(a) - 1


def _horner(p, x):
    acc = 0
    for c in p:
        acc = acc * x + c
    return acc


def _divisors(n: int) -> List[int]:
    n = abs(n)
    if n > 10**12:
        from sympy import divisors  # factoring needed only for large constants

        return [int(d) for d in divisors(n)]
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def format_poly(p: Poly, var: str = "x") -> str:
    deg = len(p) - 1
    parts = []
    for i, c in enumerate(p):
        e = deg - i
        if c == 0:
            continue
        mag = abs(c)
        mon = "" if e == 0 else var if e == 1 else f"{var}^{e}"
        coeff = str(mag) if (mag != 1 or e == 0) else ""
        body = coeff + mon
        sign = "-" if c < 0 else "+"
        parts.append(body if not parts and sign == "+" else (sign + body if not parts else f" {sign} {body}"))
    return "".join(parts) or "0"


# ------------------------------------------------------------ operations

def min_recurrence(sample: SequenceSample) -> Poly:
    """Minimal monic characteristic polynomial of degree <= len//2 - 1."""
    vals = sample.values
    if len(vals) < 4:
        raise ValueError("need at least 4 consecutive points")
    if all(v == 0 for v in vals):
        return (Fraction(1),)
    budget = len(vals) // 2 - 1
    for d in range(1, budget + 1):
        a, b = _hankel(vals, d)
        sol, _ = solve_exact(a, b)
        if sol is not None:
            # s_{k+d} = sum_i sol[i] s_{k+i}
            return tuple([Fraction(1)] + [-c for c in reversed(sol)])
    raise NoRecurrence(f"no recurrence of degree <= {budget} fits {len(vals)} points")


def roots_integer(p: Poly) -> List[int]:
    """Distinct nonzero integer roots of a monic polynomial, all of them or an error."""
    p = tuple(Fraction(c) for c in p)
    deg = len(p) - 1
    if deg < 1:
        raise ValueError("polynomial must be nonconstant")
    if any(c.denominator != 1 for c in p):
        raise NonIntegerRoot(f"{format_poly(p)} has non-integer coefficients")
    ip = [int(c) for c in p]
    if ip[-1] == 0:
        raise ZeroRoot(f"{format_poly(p)} has the root 0")
    deriv = [c * (deg - i) for i, c in enumerate(ip[:-1])]
    if _poly_gcd_degree(ip, deriv) > 0:
        raise RepeatedRoot(f"{format_poly(p)} is not squarefree")
    roots = [s * d for d in _divisors(ip[-1]) for s in (1, -1) if _horner(ip, s * d) == 0]
    if len(roots) < deg:
        raise NonIntegerRoot(f"{format_poly(p)} has only {len(roots)} integer roots of {deg}")
    roots.sort(key=lambda r: (-abs(r), r < 0))
    return roots


def solve_coefficients(roots: Sequence[int], sample: SequenceSample) -> List[Fraction]:
    if len(roots) > len(sample):
        raise ValueError("more roots than samples")
    if not roots:
        if any(sample.values):
            raise Inconsistent("nonzero samples with no roots")
        return []
    a = [[Fraction(c) ** m for c in roots] for m in sample.ms]
    sol, k = solve_exact(a, sample.values)
    if sol is None:
        raise Inconsistent(f"samples are not a combination of roots {list(roots)}")
    return sol


@dataclass(frozen=True)
class RecurrenceFit:
    char_poly: Poly
    roots: Tuple[int, ...]
    coeffs: Tuple[Fraction, ...]
    fitted: PowerSum
    train_window: Tuple[int, int]
    holdout_window: Tuple[int, int]


def fit_power_sum(sample: SequenceSample, integrality_required: bool = False,
                  holdout: int = 2) -> RecurrenceFit:
    if holdout < 2:
        raise ValueError("need at least 2 holdout points")
    if len(sample) < 6 or len(sample) - holdout < 4:
        raise ValueError("need at least 6 points and 4 training points")
    train, test = sample.split(holdout)
    poly = min_recurrence(train)
    roots = roots_integer(poly) if len(poly) > 1 else []
    coeffs = solve_coefficients(roots, train)
    fitted = PowerSum(zip(coeffs, roots), "m")
    for m, v in test.points:
        if fitted(m) != v:
            raise HoldoutMismatch(f"fit {fitted} gives {fitted(m)} at m={m}, sample has {v}")
    if integrality_required and not fitted.has_integer_coeffs():
        raise NonIntegerCoefficient(f"fit {fitted} has non-integer coefficients")
    return RecurrenceFit(poly, tuple(roots), tuple(coeffs), fitted,
                         (train.ms[0], train.ms[-1]), (test.ms[0], test.ms[-1]))
