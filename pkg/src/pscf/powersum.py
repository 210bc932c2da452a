"""Exact power sums ``b_1 c_1^n + ... + b_h c_h^n``.

Coefficients are :class:`fractions.Fraction`; roots are nonzero integers, or
nonzero rationals for the truncated expansions built in :mod:`pscf.approx`.
Every :class:`PowerSum` is kept in canonical form (like roots merged, zero
coefficients dropped, roots sorted by decreasing absolute value with the
positive root first on ties), so equality is a tuple comparison.

Text syntax, shared by the CLI and the experiment files::

    3*2^n + 1*1^n        -1/2*(-3)^n        2*(1/4)^m - 5*1^m

The printer always emits ``coeff*base^var`` terms; the parser also accepts
the shorthands ``2^n`` (unit coefficient) and bare constants like ``7``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Optional

from .errors import NegativeRoot, ParseError, UnitMismatch, ZeroPowerSum, ZeroRoot

UNITS = ("n", "m")


def _as_root(x):
    x = Fraction(x)
    if x == 0:
        raise ZeroRoot("power sum roots must be nonzero")
    return x.numerator if x.denominator == 1 else x


def _order_key(term):
    root = term[1]
    return (-abs(root), root < 0)


def rational_sqrt(x) -> Optional[Fraction]:
    """Return the nonnegative rational square root of ``x`` or None."""
    x = Fraction(x)
    if x < 0:
        return None
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


class PowerSum:
    """Immutable exact power sum in the variable ``unit`` (``"n"`` or ``"m"``)."""

    __slots__ = ("terms", "unit")

    def __init__(self, terms: Iterable = (), unit: str = "n"):
        if unit not in UNITS:
            raise ValueError(f"unit must be one of {UNITS}, got {unit!r}")
        acc: dict = {}
        for coeff, root in terms:
            root = _as_root(root)
            acc[root] = acc.get(root, Fraction(0)) + Fraction(coeff)
        merged = [(c, r) for r, c in acc.items() if c != 0]
        merged.sort(key=_order_key)
        object.__setattr__(self, "terms", tuple(merged))
        object.__setattr__(self, "unit", unit)

    def __setattr__(self, name, value):
        raise AttributeError("PowerSum is immutable")

    def __reduce__(self):
        return (PowerSum, (self.terms, self.unit))

    # construction helpers
    @classmethod
    def constant(cls, c, unit="n"):
        return cls([(c, 1)], unit)

    @classmethod
    def geometric(cls, root, coeff=1, unit="n"):
        return cls([(coeff, root)], unit)

    @classmethod
    def parse(cls, text: str, unit: Optional[str] = None, line: int = 1) -> "PowerSum":
        return parse(text, unit=unit, line=line)

    # basic queries
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def roots(self):
        return [r for _, r in self.terms]

    @property
    def coeffs(self):
        return [c for c, _ in self.terms]

    @property
    def leading(self):
        if not self.terms:
            raise ZeroPowerSum("zero power sum has no leading term")
        return self.terms[0]

    def has_integer_roots(self) -> bool:
        return all(isinstance(r, int) for r in self.roots)

    def has_integer_coeffs(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def has_positive_roots(self) -> bool:
        return all(r > 0 for r in self.roots)

    def max_abs_root(self):
        return abs(self.leading[1])

    # ring structure
    def _check(self, other):
        if not isinstance(other, PowerSum):
            if isinstance(other, (int, Rational)):
                return PowerSum.constant(other, self.unit)
            return NotImplemented
        if other.unit != self.unit:
            raise UnitMismatch(f"cannot combine power sums in {self.unit} and {other.unit}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return PowerSum(self.terms + other.terms, self.unit)

    __radd__ = __add__

    def __neg__(self):
        return PowerSum([(-c, r) for c, r in self.terms], self.unit)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, PowerSum):
            k = Fraction(other)
            return PowerSum([(c * k, r) for c, r in self.terms], self.unit)
        other = self._check(other)
        if other is NotImplemented:
            return other
        acc = {}
        for c1, r1 in self.terms:
            for c2, r2 in other.terms:
                r = r1 * r2
                acc[r] = acc.get(r, 0) + c1 * c2
        return PowerSum([(c, r) for r, c in acc.items()], self.unit)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not power sums")
        out = PowerSum.constant(1, self.unit)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def square(self):
        return self * self

    def __eq__(self, other):
        if isinstance(other, PowerSum):
            return self.unit == other.unit and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self == PowerSum.constant(other, self.unit)
        return NotImplemented

    def __hash__(self):
        return hash((self.terms, self.unit))

    # evaluation and reshaping
    def evaluate(self, n: int) -> Fraction:
        total = Fraction(0)
        for c, r in self.terms:
            total += c * (Fraction(r) ** n if n < 0 or not isinstance(r, int) else r**n)
        return total

    __call__ = evaluate

    def restrict(self, t: int, s: int) -> "PowerSum":
        """Return the power sum ``m -> self(t*m + s)``."""
        if t < 1 or not 0 <= s < t:
            raise ValueError("need t >= 1 and 0 <= s < t")
        return PowerSum([(c * Fraction(r) ** s, Fraction(r) ** t) for c, r in self.terms], "m")

    def relabel(self, unit: str) -> "PowerSum":
        return PowerSum(self.terms, unit)

    def dominant_root(self):
        """``l(alpha)``: the largest root of a positive-rooted nonzero power sum."""
        if not self.terms:
            raise ZeroPowerSum("dominant root of the zero power sum is undefined")
        if not self.has_positive_roots():
            raise NegativeRoot("restrict to a parity class before taking l()")
        return self.terms[0][1]

    def eventually_positive(self) -> bool:
        if not self.has_positive_roots():
            raise NegativeRoot("sign at infinity needs positive roots")
        return not self.terms or self.terms[0][0] > 0

    def __str__(self):
        return format_power_sum(self)

    def __repr__(self):
        return f"PowerSum({str(self)!r})"


def normalize(raw_terms, unit: str = "n") -> PowerSum:
    return PowerSum(raw_terms, unit)


def symbolic_sqrt(alpha: PowerSum) -> Optional[PowerSum]:
    """Return xi with ``xi**2 == alpha`` and positive leading term, or None.

    Terms of xi are peeled off greedily: the leading term of
    ``alpha - xi_k**2`` fixes the next term of xi through the cross product
    with xi's leading term.
    """
    if not alpha:
        raise ZeroPowerSum("zero has no canonical square root")
    b1, c1 = alpha.leading
    rb, rc = rational_sqrt(b1), rational_sqrt(c1)
    if rb is None or rc is None or rc.denominator != 1:
        return None
    xi = PowerSum([(rb, rc)], alpha.unit)
    residual = alpha - xi.square()
    while residual:
        top = abs(residual.leading[1])
        new = []
        for b, r in residual.terms:
            if abs(r) != top:
                break
            root = Fraction(r) / rc
            if root.denominator != 1:
                return None
            new.append((b / (2 * rb), root))
        xi = xi + PowerSum(new, alpha.unit)
        residual = alpha - xi.square()
    return xi


# ---------------------------------------------------------------- text syntax

def _fmt_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_base(r) -> str:
    if isinstance(r, int) and r > 0:
        return str(r)
    return f"({_fmt_rational(Fraction(r))})"


def format_power_sum(ps: PowerSum) -> str:
    if not ps.terms:
        return "0"
    parts = []
    for i, (c, r) in enumerate(ps.terms):
        body = f"{_fmt_rational(abs(c))}*{_fmt_base(r)}^{ps.unit}"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|([-+*/^()])|([nm])|(\S))")


def _tokenize(text, line):
    toks = []
    pos = 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:  # only trailing whitespace left
            break
        num, op, var, bad = mt.groups()
        col = mt.start(mt.lastindex) + 1
        if bad is not None:
            raise ParseError(f"unexpected character {bad!r}", text, col, line)
        kind = "int" if num else "op" if op else "var"
        toks.append((kind, num or op or var, col))
        pos = mt.end()
    toks.append(("end", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text, line):
        self.text = text
        self.line = line
        self.toks = _tokenize(text, line)
        self.i = 0
        self.unit = None

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            self.fail(f"expected {want}, got {got!r}", tok[2])
        self.i += 1
        return tok

    def fail(self, msg, col):
        raise ParseError(msg, self.text, col, self.line)

    def rational(self):
        num = int(self.take("int")[1])
        if self.peek()[1] == "/":
            self.take()
            tok = self.take("int")
            den = int(tok[1])
            if den == 0:
                self.fail("zero denominator", tok[2])
            return Fraction(num, den)
        return Fraction(num)

    def power(self, base):
        self.take("op", "^")
        tok = self.take("var")
        if self.unit is None:
            self.unit = tok[1]
        elif tok[1] != self.unit:
            self.fail(f"mixed variables {self.unit!r} and {tok[1]!r}", tok[2])
        if base == 0:
            self.fail("root must be nonzero", tok[2])
        return base

    def paren_base(self):
        self.take("op", "(")
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        val = sign * self.rational()
        self.take("op", ")")
        return val

    def term(self):
        tok = self.peek()
        if tok[1] == "(":
            return Fraction(1), self.power(self.paren_base())
        if tok[0] != "int":
            self.fail(f"expected a term, got {tok[1] or 'end of input'!r}", tok[2])
        if self.toks[self.i + 1][1] == "^":
            base = int(self.take()[1])
            return Fraction(1), self.power(base)
        coeff = self.rational()
        if self.peek()[1] == "*":
            self.take()
            if self.peek()[1] == "(":
                return coeff, self.power(self.paren_base())
            base = int(self.take("int")[1])
            return coeff, self.power(base)
        return coeff, 1

    def expr(self):
        terms = []
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        while True:
            c, r = self.term()
            terms.append((sign * c, r))
            tok = self.peek()
            if tok[0] == "end":
                break
            if tok[1] not in ("+", "-"):
                self.fail(f"expected '+' or '-', got {tok[1]!r}", tok[2])
            sign = -1 if self.take()[1] == "-" else 1
        return terms


def parse(text: str, unit: Optional[str] = None, line: int = 1) -> PowerSum:
    """Parse the power-sum text syntax; raises :class:`ParseError` with a column."""
    if not text.strip():
        raise ParseError("empty power sum", text, 1, line)
    p = _Parser(text, line)
    terms = p.expr()
    found = p.unit
    if unit is not None and found is not None and found != unit:
        raise ParseError(f"expected variable {unit!r}, found {found!r}", text, 1, line)
    return PowerSum(terms, found or unit or "n")
