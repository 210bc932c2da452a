import dataclasses
from fractions import Fraction

import mpmath
import pytest

from pscf.errors import NegativeLeading, PrecisionExhausted
from pscf.approx import (
    RadicalPowerSum,
    binomial_half,
    construct_eta,
    inverse_expansion,
    sqrt_expansion,
    verify_eta,
)
from pscf.powersum import PowerSum, parse

ZERO, ONE = PowerSum(), PowerSum.constant(1)


def mp(x):
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def eta_value(eta: RadicalPowerSum, m):
    return mpmath.sqrt(mp(eta.radicand)) * mp(eta.radical_part(m)) + mp(eta.rational_part(m))


def test_binomial_half():
    assert [binomial_half(j) for j in range(4)] == [1, Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16)]
    assert binomial_half(4) == Fraction(-5, 128)
    with pytest.raises(ValueError):
        binomial_half(-1)


def test_binomial_half_is_taylor_coefficient():
    with mpmath.workprec(200):
        coeffs = mpmath.taylor(lambda x: mpmath.sqrt(1 + x), 0, 8)
        for j, c in enumerate(coeffs):
            assert abs(mp(binomial_half(j)) - c) < mpmath.mpf(2) ** -150


class TestSqrtExpansion:
    def test_order_two_and_three(self):
        a = parse("4^n + 2^n")
        e2, tail2 = sqrt_expansion(a, 0, 2)
        assert e2.is_rational
        assert e2.rational_part == parse("4^m + 1/2 - 1/8*(1/4)^m")
        assert tail2 == Fraction(1, 16)
        e3, tail3 = sqrt_expansion(a, 0, 3)
        assert e3.rational_part == parse("4^m + 1/2 - 1/8*(1/4)^m + 1/16*(1/16)^m")
        assert tail3 == Fraction(1, 64)

    def test_numeric_at_m6(self):
        a = parse("4^n + 2^n")
        e, tail = sqrt_expansion(a, 0, 3)
        with mpmath.workprec(300):
            err = abs(mpmath.sqrt(mp(a(12))) - eta_value(e, 6))
            assert err < mp(tail) ** 6

    def test_single_term_collapses(self):
        e, tail = sqrt_expansion(parse("9^n"), 1, 0)
        assert e.is_rational and e.rational_part == parse("3*9^m") and tail == 0
        e, _ = sqrt_expansion(parse("9^n"), 0, 0)
        assert e.rational_part == parse("9^m")

    def test_radical(self):
        e, tail = sqrt_expansion(parse("2*4^n"), 1, 0)
        assert e.radicand == 8 and e.radical_part == parse("4^m") and not e.rational_part
        assert tail == 0

    def test_negative_leading(self):
        with pytest.raises(NegativeLeading):
            sqrt_expansion(parse("-4^n + 1"), 0, 1)

    @pytest.mark.parametrize("text,r", [("4^n + 2^n", 0), ("2*4^n + 3", 1), ("9^n - 2^n + 5", 1),
                                        ("3*16^n + 4^n", 0)])
    def test_truncation_error_decays_at_tail_root(self, text, r):
        a = parse(text)
        for H in range(4):
            e, tail = sqrt_expansion(a, r, H)
            with mpmath.workprec(400):
                ratios = []
                for m in range(6, 14):
                    err = abs(mpmath.sqrt(mp(a(2 * m + r))) - eta_value(e, m))
                    ratios.append(err / mp(tail) ** m)
                assert max(ratios[3:]) <= 2 * ratios[0] + mpmath.mpf(2) ** -200


class TestInverseExpansion:
    def test_examples(self):
        assert inverse_expansion(ONE, 3) == (ONE, 0)
        inv, tail = inverse_expansion(parse("2^n"), 5)
        assert inv == parse("(1/2)^n") and tail == 0

    def test_geometric(self):
        inv, tail = inverse_expansion(parse("2^n - 1"), 2)
        assert inv == parse("(1/2)^n + (1/4)^n + (1/8)^n")
        assert tail == Fraction(1, 16)
        n = 10
        exact = Fraction(1, 2**n - 1)
        assert abs(exact - inv(n)) < 2 * tail ** n


class TestConstructEta:
    def test_reference_example(self):
        a = parse("4^n + 2^n")
        ec = construct_eta(a, ZERO, ONE, 0, Fraction(1, 9))
        assert ec.H == 4 and ec.s == 0
        assert ec.eta.rational_part == parse(
            "4^m + 1/2 - 1/8*(1/4)^m + 1/16*(1/16)^m - 5/128*(1/64)^m")
        assert ec.error_root == Fraction(1, 256) and ec.postcondition_ok

    def test_alpha_zero(self):
        ec = construct_eta(ZERO, parse("2^n + 1"), parse("2^n - 1"), 0, Fraction(1, 9))
        assert ec.eta.is_rational and ec.eta.radicand == 0 and ec.postcondition_ok
        rep = verify_eta(ec, ZERO, parse("2^n + 1"), parse("2^n - 1"), range(3, 13))
        assert rep.ok

    def test_exact_case(self):
        a = parse("9^n")
        ec = construct_eta(a, ZERO, ONE, 1, Fraction(1, 9))
        assert ec.eta.rational_part == parse("3*9^m") and ec.error_root == 0
        assert verify_eta(ec, a, ZERO, ONE, range(3, 13)).max_ratio == 0

    def test_reduces_to_sqrt_expansion(self):
        for text in ["4^n + 2^n", "2*4^n + 1", "9^n + 3^n + 1", "5*25^n - 4^n"]:
            for r in (0, 1):
                a = parse(text)
                ec = construct_eta(a, ZERO, ONE, r)
                e, _ = sqrt_expansion(a, r, ec.H)
                assert ec.eta == e

    @pytest.mark.parametrize("a,b,g,r", [
        ("4^n + 2^n", "0", "1", 0),
        ("2*4^n + 1", "2^n", "1", 1),
        ("9^n + 3^n", "1", "2^n + 1", 0),
        ("4^n + 1", "3", "3^n - 2^n", 1),
        ("16^n + 4^n + 1", "2^n", "2^n + 1", 0),
    ])
    def test_root_denominator_law(self, a, b, g, r):
        a, b, g = parse(a), parse(b), parse(g)
        ec = construct_eta(a, b, g, r)
        # n-unit leading roots; eta's roots live in m-units (squares of these)
        c1 = abs(a.leading[1]) if a else 1
        g1 = abs(g.leading[1])
        base = c1 * g1
        bound = 2 * (ec.H + ec.s + 1)
        for root in ec.eta.roots():
            den = Fraction(root).denominator
            assert any((base ** K) % den == 0 for K in range(bound + 1)), (root, bound)

    @pytest.mark.parametrize("a,b,g,r", [
        ("4^n + 2^n", "0", "1", 0),
        ("2*4^n + 1", "2^n", "1", 1),
        ("9^n + 3^n", "1", "2^n + 1", 0),
        ("4^n + 1", "3", "3^n - 2^n", 1),
    ])
    def test_error_law(self, a, b, g, r):
        a, b, g = parse(a), parse(b), parse(g)
        ec = construct_eta(a, b, g, r)
        rep = verify_eta(ec, a, b, g, range(3, 13))
        assert rep.bounded and rep.postcondition_ok

    def test_collapse_keeps_value(self):
        raw = RadicalPowerSum(Fraction(9, 4), parse("2^m + 1/3"), parse("5^m"))
        col = RadicalPowerSum.make(Fraction(9, 4), parse("2^m + 1/3"), parse("5^m"))
        assert col.is_rational
        for m in range(11):
            assert col.rational_part(m) == Fraction(3, 2) * raw.radical_part(m) + raw.rational_part(m)

    def test_bad_t(self):
        with pytest.raises(ValueError):
            construct_eta(parse("4^n"), ZERO, ONE, 0, 1)


class TestVerifyEta:
    def test_decay(self):
        a = parse("4^n + 2^n")
        ec = construct_eta(a, ZERO, ONE, 0)
        rep = verify_eta(ec, a, ZERO, ONE, range(3, 13), precision_bits=300)
        assert rep.ok and rep.non_increasing and rep.bounded
        assert 0 < rep.max_ratio < 1e-3

    def test_forged_t_detected(self):
        a = parse("4^n + 2^n")
        ec = construct_eta(a, ZERO, ONE, 0)
        forged = dataclasses.replace(ec, t=Fraction(1, 17))
        rep = verify_eta(forged, a, ZERO, ONE, range(3, 13))
        assert not rep.postcondition_ok and not rep.ok
        assert not rep.non_increasing

    def test_precision_cap(self):
        a = parse("4^n + 2^n")
        ec = construct_eta(a, ZERO, ONE, 0)
        with pytest.raises(PrecisionExhausted):
            verify_eta(ec, a, ZERO, ONE, range(40, 42), precision_bits=128, precision_cap=130)

    def test_arguments(self):
        a = parse("4^n")
        ec = construct_eta(a, ZERO, ONE, 0)
        with pytest.raises(ValueError):
            verify_eta(ec, a, ZERO, ONE, range(3, 5), precision_bits=64)
        with pytest.raises(ValueError):
            verify_eta(ec, a, ZERO, ONE, [])

    def test_radical_against_float_oracle(self):
        a = parse("2*4^n + 1")
        ec = construct_eta(a, ZERO, ONE, 1)
        assert not ec.eta.is_rational
        rep = verify_eta(ec, a, ZERO, ONE, range(3, 13))
        with mpmath.workprec(800):
            for m, lo, hi in zip(rep.ms, rep.ratio_lo, rep.ratio_hi):
                ratio = abs(mpmath.sqrt(mp(a(2 * m + 1))) - eta_value(ec.eta, m)) / mp(ec.t) ** (2 * m)
                assert mp(lo) <= ratio <= mp(hi)
