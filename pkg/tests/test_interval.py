from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pscf.interval import Interval, sqrt_interval

fr = st.fractions(min_value=-50, max_value=50, max_denominator=30)


def iv(a, b):
    return Interval(min(a, b), max(a, b))


@given(fr, fr, fr, fr, fr, fr)
def test_operations_enclose(a, b, c, d, x, y):
    I, J = iv(a, b), iv(c, d)
    # pick points inside each interval
    p = I.lo + (I.hi - I.lo) * abs(x) / 50
    q = J.lo + (J.hi - J.lo) * abs(y) / 50
    assert p + q in I + J
    assert p - q in I - J
    assert p * q in I * J
    assert abs(p) in abs(I)
    if not J.lo <= 0 <= J.hi:
        assert p / q in I / J


def test_division_by_zero_interval():
    with pytest.raises(ZeroDivisionError):
        Interval.point(1) / Interval(Fraction(-1), Fraction(1))


def test_empty_rejected():
    with pytest.raises(ValueError):
        Interval(Fraction(2), Fraction(1))


@given(st.fractions(min_value=0, max_value=10**6, max_denominator=10**4), st.integers(10, 400))
def test_sqrt_encloses_and_is_tight(x, bits):
    I = sqrt_interval(x, bits)
    assert I.lo >= 0
    assert I.lo * I.lo <= x <= I.hi * I.hi
    assert I.width <= Fraction(1, 1 << bits)
    with mpmath.workprec(bits + 64):
        s = mpmath.sqrt(mpmath.mpf(x.numerator) / x.denominator)
        assert mpmath.mpf(I.lo.numerator) / I.lo.denominator <= s
        assert s <= mpmath.mpf(I.hi.numerator) / I.hi.denominator


def test_sqrt_exact_square_is_point():
    assert sqrt_interval(Fraction(9, 4), 20) == Interval.point(Fraction(3, 2))


def test_sqrt_negative():
    with pytest.raises(ValueError):
        sqrt_interval(-1, 10)
