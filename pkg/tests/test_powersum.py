from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pscf.errors import NegativeRoot, ParseError, UnitMismatch, ZeroPowerSum, ZeroRoot
from pscf.powersum import PowerSum, format_power_sum, normalize, parse, rational_sqrt, symbolic_sqrt

from conftest import power_sums


def ps(text):
    return parse(text)


class TestNormalize:
    def test_merges_like_roots(self):
        assert normalize([(1, 2), (3, 2)]).terms == ((4, 2),)

    def test_cancellation_gives_zero(self):
        assert not normalize([(1, 2), (-1, 2)])

    def test_zero_root_rejected(self):
        with pytest.raises(ZeroRoot):
            normalize([(1, 0)])

    def test_canonical_order(self):
        p = PowerSum([(1, 2), (1, -3), (1, 3), (1, -2)])
        assert p.roots == [3, -3, 2, -2]

    @given(power_sums())
    def test_idempotent(self, p):
        assert normalize(p.terms, p.unit) == p


class TestEvaluate:
    def test_examples(self):
        assert ps("3*2^n + 1*1^n")(4) == 49
        assert PowerSum()(10) == 0
        assert ps("1/2*4^n - 3^n")(3) == 5

    def test_rational_root(self):
        assert ps("(1/4)^n")(2) == Fraction(1, 16)

    @given(power_sums(), st.integers(0, 12))
    def test_matches_direct_sum(self, p, n):
        assert p(n) == sum(Fraction(c) * Fraction(r) ** n for c, r in p.terms)


class TestRing:
    def test_examples(self):
        assert ps("2^n") * ps("3^n") == ps("6^n")
        assert ps("2^n + 1").square() == ps("4^n + 2*2^n + 1")
        assert not (ps("2^n + 7") + -ps("2^n + 7"))

    def test_unit_mismatch(self):
        with pytest.raises(UnitMismatch):
            ps("2^n") + parse("2^m")

    def test_scalar_arithmetic(self):
        assert ps("2^n") + 1 == ps("2^n + 1")
        assert 3 * ps("2^n") == ps("3*2^n")
        assert 1 - ps("2^n") == ps("-2^n + 1")

    @settings(max_examples=60)
    @given(power_sums(), power_sums(), power_sums())
    def test_laws(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        assert not (a - a)

    @given(power_sums(3), power_sums(3), st.integers(0, 8))
    def test_homomorphism(self, a, b, n):
        assert (a * b)(n) == a(n) * b(n)
        assert (a + b)(n) == a(n) + b(n)

    def test_pow(self):
        assert ps("2^n + 1") ** 3 == ps("2^n + 1") * ps("2^n + 1").square()
        assert ps("2^n") ** 0 == 1


class TestRestrict:
    def test_examples(self):
        assert ps("2^n + 1").restrict(2, 1) == parse("2*4^m + 1")
        assert ps("(-2)^n").restrict(2, 0) == parse("4^m")
        assert ps("3^n - 2^n").restrict(2, 0) == parse("9^m - 4^m")

    @given(power_sums(), st.sampled_from([(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)]),
           st.integers(0, 20))
    def test_evaluation_law(self, p, ts, m):
        t, s = ts
        q = p.restrict(t, s)
        assert q.unit == "m"
        assert q(m) == p(t * m + s)

    @given(power_sums())
    def test_even_restriction_has_positive_roots(self, p):
        assert p.restrict(2, 1).has_positive_roots()

    def test_bad_args(self):
        with pytest.raises(ValueError):
            ps("2^n").restrict(2, 2)


class TestDominantRoot:
    def test_examples(self):
        assert ps("5*7^n - 3^n + 2").dominant_root() == 7
        assert (ps("2^n + 1") * ps("3^n - 1")).dominant_root() == 6

    def test_errors(self):
        with pytest.raises(ZeroPowerSum):
            PowerSum().dominant_root()
        with pytest.raises(NegativeRoot):
            ps("(-2)^n").dominant_root()

    @given(power_sums(positive=True), power_sums(positive=True))
    def test_laws(self, a, b):
        if a and b:
            assert (a * b).dominant_root() == a.dominant_root() * b.dominant_root()
            if a + b:
                assert (a + b).dominant_root() <= max(a.dominant_root(), b.dominant_root())

    @given(power_sums(positive=True))
    def test_growth_sandwich(self, p):
        if not p or p.leading[0] <= 0:
            return
        lead, L = p.leading
        rest = sum(abs(c) for c, _ in p.terms[1:])
        second = max((r for _, r in p.terms[1:]), default=0)
        # past n0 the lower-root terms are below half the leading term
        n0 = 0
        while rest * Fraction(second) ** n0 > lead * Fraction(L) ** n0 / 2:
            n0 += 1
        k1, k2 = lead / 2, lead + rest
        for n in (10, 20, 40):
            if n >= n0:
                scale = Fraction(L) ** n
                assert k1 * scale <= p(n) <= k2 * scale


class TestEventuallyPositive:
    def test_examples(self):
        assert ps("2^n - 3").eventually_positive()
        assert not ps("-2^n + 100").eventually_positive()
        assert PowerSum().eventually_positive()

    def test_negative_root(self):
        with pytest.raises(NegativeRoot):
            ps("(-3)^n + 9^n").eventually_positive()


class TestSymbolicSqrt:
    def test_examples(self):
        assert symbolic_sqrt(ps("4^n + 6*2^n + 9")) == ps("2^n + 3")
        assert symbolic_sqrt(ps("4^n + 1")) is None
        assert symbolic_sqrt(ps("9^n")) == ps("3^n")

    def test_non_square_leading(self):
        assert symbolic_sqrt(ps("2*4^n")) is None
        assert symbolic_sqrt(ps("2^n")) is None

    @given(power_sums(3, positive=True))
    def test_square_round_trip(self, xi):
        if not xi:
            return
        got = symbolic_sqrt(xi.square())
        assert got == (xi if xi.leading[0] > 0 else -xi)

    def test_rational_sqrt(self):
        assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
        assert rational_sqrt(2) is None and rational_sqrt(-4) is None


class TestText:
    def test_canonical_printer(self):
        assert format_power_sum(ps("1 + 3*2^n")) == "3*2^n + 1*1^n"
        assert str(ps("-(1/4)^n + 4^n")) == "1*4^n - 1*(1/4)^n"
        assert str(ps("(-2)^n")) == "1*(-2)^n"
        assert str(PowerSum()) == "0"

    def test_shorthands(self):
        assert ps("2^n") == PowerSum([(1, 2)])
        assert ps("7") == PowerSum.constant(7)
        assert ps("-3/2*5^n") == PowerSum([(Fraction(-3, 2), 5)])

    @given(power_sums(unit="n") | power_sums(unit="m"))
    def test_round_trip(self, p):
        text = str(p)
        assert str(parse(text, unit=p.unit)) == text
        assert parse(text, unit=p.unit) == p

    @pytest.mark.parametrize("text,col", [
        ("2^n +", 6),
        ("2^n + 3^m", 9),
        ("2 ^ x", 5),
        ("1/0*2^n", 3),
        ("0^n", 3),
        ("2^n 3", 5),
    ])
    def test_errors_carry_column(self, text, col):
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.column == col

    def test_empty(self):
        with pytest.raises(ParseError):
            parse("   ")

    def test_unit_mismatch_on_request(self):
        with pytest.raises(ParseError):
            parse("2^n", unit="m")
