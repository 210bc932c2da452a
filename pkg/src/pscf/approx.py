"""Effective approximation of ``(sqrt(alpha) + beta) / gamma`` on a parity class.

For n = 2m + r the three power sums are restricted to m, the square root is
expanded as ``sqrt(b1) * c1^m * sum_j binom(1/2, j) * sigma^j`` and the
reciprocal of gamma as a truncated geometric series in ``phi``. Multiplying
the truncations gives ``eta(m) = sqrt(rho) * A(m) + B(m)`` whose distance to
the target is ``O(e^m)`` for an explicit ``error_root`` e.

Truncation orders are the smallest making every discarded product's m-root
fall below ``t**2``:

* ``H``: ``c1 * (C2/C1)**(H+1) / G1 < t**2``  (square-root tail times 1/gamma)
* ``s``: ``(G2/G1)**(s+1) / G1 * max(c1, l(beta)) < t**2``

Here ``C_i``, ``G_i`` are the m-roots of the restricted alpha and gamma and
``c1 = sqrt(C1)``. This covers beta = 0 and gamma = 1 without a case split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Tuple

from .cf import is_square, sign_of
from .errors import NegativeLeading, NegativeRoot, PrecisionExhausted, ZeroPowerSum
from .interval import Interval, sqrt_interval
from .powersum import PowerSum, rational_sqrt

DEFAULT_T = Fraction(1, 9)
PRECISION_CAP = 4096


def binomial_half(j: int) -> Fraction:
    """Taylor coefficient ``binom(1/2, j)`` of ``sqrt(1 + x)``."""
    if j < 0:
        raise ValueError("j must be >= 0")
    out = Fraction(1)
    for i in range(j):
        out = out * (Fraction(1, 2) - i) / (i + 1)
    return out


def _zero_m():
    return PowerSum((), "m")


@dataclass(frozen=True)
class RadicalPowerSum:
    """``sqrt(radicand) * radical_part(m) + rational_part(m)``.

    Build through :meth:`make`, which collapses a rational-square radicand
    into the rational part; the collapsed form has radicand 0.
    """

    radicand: Fraction
    radical_part: PowerSum
    rational_part: PowerSum

    @classmethod
    def make(cls, radicand, radical_part: PowerSum, rational_part: PowerSum) -> "RadicalPowerSum":
        radicand = Fraction(radicand)
        if radicand < 0:
            raise ValueError("radicand must be nonnegative")
        if radicand == 0 or not radical_part:
            return cls(Fraction(0), _zero_m(), rational_part)
        root = rational_sqrt(radicand)
        if root is not None:
            return cls(Fraction(0), _zero_m(), rational_part + radical_part * root)
        return cls(radicand, radical_part, rational_part)

    @classmethod
    def rational(cls, ps: PowerSum) -> "RadicalPowerSum":
        return cls(Fraction(0), _zero_m(), ps)

    @property
    def is_rational(self) -> bool:
        return self.radicand == 0

    def roots(self):
        return sorted(set(self.radical_part.roots) | set(self.rational_part.roots), reverse=True)

    def interval(self, m: int, bits: int) -> Interval:
        rad = sqrt_interval(self.radicand, bits) * self.radical_part(m)
        return rad + self.rational_part(m)

    def __str__(self):
        if self.is_rational:
            return str(self.rational_part)
        return f"sqrt({self.radicand})*[{self.radical_part}] + [{self.rational_part}]"


def _restricted_sqrt_data(alpha: PowerSum, r: int):
    ar = alpha.restrict(2, r)
    if not ar:
        return ar, None, None
    B1, C1 = ar.leading
    if B1 < 0:
        raise NegativeLeading(f"alpha(2m+{r}) has negative leading coefficient {B1}")
    c1 = rational_sqrt(C1)
    sigma = PowerSum([(b / B1, Fraction(c) / C1) for b, c in ar.terms[1:]], "m")
    return ar, c1, sigma


def sqrt_tail_root(c1, sigma: PowerSum, H: int) -> Fraction:
    if not sigma:
        return Fraction(0)
    return c1 * Fraction(sigma.leading[1]) ** (H + 1)


def sqrt_expansion(alpha: PowerSum, r: int, H: int) -> Tuple[RadicalPowerSum, Fraction]:
    """Truncated square root of alpha(2m+r) to Taylor order H, plus the tail's m-root."""
    ar, c1, sigma = _restricted_sqrt_data(alpha, r)
    if not ar:
        return RadicalPowerSum.rational(_zero_m()), Fraction(0)
    series = PowerSum((), "m")
    power = PowerSum.constant(1, "m")
    for j in range(H + 1):
        series = series + power * binomial_half(j)
        if not sigma:
            break
        power = power * sigma
    A = PowerSum.geometric(c1, unit="m") * series
    return RadicalPowerSum.make(ar.leading[0], A, _zero_m()), sqrt_tail_root(c1, sigma, H)


def _inverse_data(gamma: PowerSum):
    if not gamma:
        raise ZeroPowerSum("gamma must not vanish identically")
    if not gamma.has_positive_roots():
        raise NegativeRoot("restrict gamma to a parity class first")
    f1, g1 = gamma.leading
    phi = PowerSum([(-f / f1, Fraction(g) / g1) for f, g in gamma.terms[1:]], gamma.unit)
    return f1, Fraction(g1), phi


def inverse_tail_root(g1, phi: PowerSum, s: int) -> Fraction:
    if not phi:
        return Fraction(0)
    return Fraction(phi.leading[1]) ** (s + 1) / g1


def inverse_expansion(gamma: PowerSum, s: int) -> Tuple[PowerSum, Fraction]:
    """``1/gamma`` truncated after ``phi**s``, plus the m-root (or n-root) of the tail."""
    f1, g1, phi = _inverse_data(gamma)
    series = PowerSum((), gamma.unit)
    power = PowerSum.constant(1, gamma.unit)
    for _ in range(s + 1):
        series = series + power
        if not phi:
            break
        power = power * phi
    lead = PowerSum.geometric(1 / g1, 1 / f1, unit=gamma.unit)
    return lead * series, inverse_tail_root(g1, phi, s)


@dataclass(frozen=True)
class EtaConstruction:
    eta: RadicalPowerSum
    H: int
    s: int
    t: Fraction
    r: int
    error_root: Fraction
    sigma: PowerSum
    phi: PowerSum

    @property
    def postcondition_ok(self) -> bool:
        return self.error_root < self.t * self.t


def construct_eta(alpha: PowerSum, beta: PowerSum, gamma: PowerSum, r: int,
                  t=DEFAULT_T) -> EtaConstruction:
    t = Fraction(t)
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    if r not in (0, 1):
        raise ValueError("r must be 0 or 1")
    t2 = t * t
    gr = gamma.restrict(2, r)
    br = beta.restrict(2, r)
    ar, c1, sigma = _restricted_sqrt_data(alpha, r)
    f1, G1, phi = _inverse_data(gr)
    if sigma is None:
        sigma = _zero_m()

    H = 0
    if ar:
        while sqrt_tail_root(c1, sigma, H) / G1 >= t2:
            H += 1
    scale = max(
        ([Fraction(c1)] if ar else []) + ([Fraction(br.dominant_root())] if br else []),
        default=Fraction(0),
    )
    s = 0
    if scale:
        while inverse_tail_root(G1, phi, s) * scale >= t2:
            s += 1

    root_part, _ = sqrt_expansion(alpha, r, H)
    ginv, _ = inverse_expansion(gr, s)
    eta = RadicalPowerSum.make(
        root_part.radicand,
        ginv * root_part.radical_part,
        ginv * (root_part.rational_part + br),
    )
    e_alpha = sqrt_tail_root(c1, sigma, H) if ar else Fraction(0)
    e_gamma = inverse_tail_root(G1, phi, s)
    error_root = max(e_alpha / G1, e_gamma * scale, e_gamma * e_alpha)
    return EtaConstruction(eta, H, s, t, r, error_root, sigma, phi)


# ------------------------------------------------------------- verification

def _radical_split(x: Fraction):
    # sqrt(p/q) = sqrt(p*q)/q
    return Fraction(1, x.denominator), x.numerator * x.denominator


def _is_zero(u, a, v, rho, w) -> bool:
    """Exact test of ``u*sqrt(a) - v*sqrt(rho) + w == 0`` for rationals a, rho >= 0."""
    ka, da = _radical_split(Fraction(a))
    kr, dr = _radical_split(Fraction(rho))
    x, d1 = u * ka, da
    y, d2, z = v * kr, dr, -w
    # x*sqrt(d1) == y*sqrt(d2) + z
    if is_square(d2):
        y, z, d2 = 0, z + y * math.isqrt(d2), 0
    sx = ((x > 0) - (x < 0)) if d1 else 0
    if sx != sign_of(y, d2, z):
        return False
    if y * z != 0 and d2:
        return False
    return x * x * d1 == y * y * d2 + z * z


@dataclass
class EtaReport:
    ms: List[int]
    ratio_lo: List[Fraction]
    ratio_hi: List[Fraction]
    bits_used: List[int]
    max_ratio: float
    non_increasing: bool
    bounded: bool
    postcondition_ok: bool
    ok: bool = field(init=False)

    def __post_init__(self):
        self.ok = self.non_increasing and self.bounded and self.postcondition_ok


def _ratio_interval(ec, a, b, g, m, bits):
    eta = ec.eta
    A, B = eta.radical_part(m), eta.rational_part(m)
    diff = sqrt_interval(a, bits) / g - sqrt_interval(eta.radicand, bits) * A + (b / g - B)
    return abs(diff) / (ec.t ** (2 * m))


def verify_eta(ec: EtaConstruction, alpha: PowerSum, beta: PowerSum, gamma: PowerSum,
               m_range: Iterable[int], precision_bits: int = 300,
               precision_cap: int = PRECISION_CAP, rel_tol=Fraction(1, 1 << 24)) -> EtaReport:
    """Rigorously bound ``|target(m) - eta(m)| / t^(2m)`` over m_range.

    Each m starts at ``precision_bits`` and doubles until the enclosure is
    relatively tight (or the difference is exactly zero).
    """
    if precision_bits < 128:
        raise ValueError("precision_bits must be >= 128")
    ms = list(m_range)
    if not ms:
        raise ValueError("m_range is empty")
    r = ec.r
    los, his, used = [], [], []
    for m in ms:
        n = 2 * m + r
        a, b, g = alpha(n), beta(n), gamma(n)
        if a < 0 or g == 0:
            raise ValueError(f"target undefined at m={m}")
        eta = ec.eta
        A, B = eta.radical_part(m), eta.rational_part(m)
        if _is_zero(1 / g, a, A, eta.radicand, b / g - B):
            los.append(Fraction(0))
            his.append(Fraction(0))
            used.append(0)
            continue
        bits = precision_bits
        while True:
            iv = _ratio_interval(ec, a, b, g, m, bits)
            if iv.lo > 0 and iv.width <= rel_tol * iv.hi:
                break
            bits *= 2
            if bits > precision_cap:
                raise PrecisionExhausted(f"m={m}: undecided at {precision_cap} bits")
        los.append(iv.lo)
        his.append(iv.hi)
        used.append(bits)
    non_inc = all(his[i + 1] <= los[i] for i in range(len(ms) - 1))
    bounded = all(h <= 2 * los[0] for h in his) if los[0] > 0 else all(h == 0 for h in his)
    return EtaReport(ms, los, his, used, float(max(his)), non_inc, bounded, ec.postcondition_ok)
