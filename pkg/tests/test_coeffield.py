"""Exact arithmetic and linear algebra over Q(alpha)."""

import random
from fractions import Fraction

import pytest

from jetsym.coeffield import (NEG_INF, AlphaPoly, BigRational,
                              RationalFunction, rf, solve_linear)
from jetsym.errors import DivisionByZero, PoleAtParameter

from conftest import random_rf

ALPHA = RationalFunction.param()
S = RationalFunction(AlphaPoly((-1, 2)))  # 2*alpha - 1


class TestBigRational:
    def test_invariants(self):
        q = BigRational(6, -8)
        assert q.numerator == -3 and q.denominator == 4
        assert BigRational(0, 5) == BigRational(0, 1)


class TestAlphaPoly:
    def test_zero_degree_sentinel(self):
        assert AlphaPoly().degree == NEG_INF
        assert AlphaPoly((0, 0)).degree == NEG_INF
        assert NEG_INF < 0

    def test_leading_normalization(self):
        p = AlphaPoly((1, 2, 0))
        assert p.degree == 1 and p.leading == 2

    def test_divmod_exact(self):
        p = AlphaPoly((-1, 0, 4))  # 4a^2 - 1
        d = AlphaPoly((-1, 2))     # 2a - 1
        q, r = p.divmod(d)
        assert r.is_zero
        assert q == AlphaPoly((1, 2))  # 2a + 1

    def test_divmod_remainder(self):
        p = AlphaPoly((1, 1, 1))
        d = AlphaPoly((0, 1))
        q, r = p.divmod(d)
        assert q == AlphaPoly((1, 1)) and r == AlphaPoly((1,))

    def test_gcd_monic(self):
        p = AlphaPoly((-1, 2)) * AlphaPoly((3, 1))
        q = AlphaPoly((-1, 2)) * AlphaPoly((5, 2))
        g = p.gcd(q)
        assert g == AlphaPoly((Fraction(-1, 2), 1))  # monic alpha - 1/2

    def test_text(self):
        assert AlphaPoly((-1, 2)).text() == "2*alpha - 1"
        assert AlphaPoly((1, 0, -3)).text() == "-3*alpha^2 + 1"
        assert AlphaPoly().text() == "0"


class TestRationalFunctionArithmetic:
    def test_add_one_and_alpha(self):
        assert (rf(1) + ALPHA) == RationalFunction(AlphaPoly((1, 1)))

    def test_self_division(self):
        assert S / S == rf(1)

    def test_m21_leading_coefficient(self):
        got = rf(1) / S * (ALPHA * rf(2))
        assert got == RationalFunction(AlphaPoly((0, 2)), AlphaPoly((-1, 2)))
        assert got.text() == "(2*alpha)/(2*alpha - 1)"

    def test_division_by_zero(self):
        with pytest.raises(DivisionByZero):
            rf(1) / rf(0)

    def test_canonical_monic_denominator(self):
        x = RationalFunction(AlphaPoly((1,)), AlphaPoly((-1, 2)))
        assert x.den.leading == 1
        assert x.num == AlphaPoly((Fraction(1, 2),))

    def test_eval(self):
        two_a_over_s = ALPHA * rf(2) / S
        assert two_a_over_s.eval(0) == 0
        with pytest.raises(PoleAtParameter) as exc:
            (rf(1) / S).eval(Fraction(1, 2))
        assert "2*alpha - 1" in str(exc.value)
        k2_lead = rf(-1) / S
        assert k2_lead.eval(1) == -1

    def test_canonicalization_idempotent(self):
        rng = random.Random(7)
        for _ in range(200):
            x = random_rf(rng, rational=True)
            y = RationalFunction(x.num, x.den)
            assert x == y
            assert x.num.coeffs == y.num.coeffs and x.den.coeffs == y.den.coeffs


class TestFieldAxioms:
    def test_field_axioms_random(self):
        rng = random.Random(11)
        for _ in range(150):
            a = random_rf(rng, rational=True)
            b = random_rf(rng, rational=True)
            c = random_rf(rng, rational=True)
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a + b == b + a
            assert a * b == b * a
            assert a * (b + c) == a * b + a * c
            if not a.is_zero:
                assert a * a.inverse() == rf(1)

    def test_eval_is_homomorphism(self):
        rng = random.Random(13)
        pts = [Fraction(0), Fraction(1), Fraction(2, 3), Fraction(-5, 7)]
        count = 0
        while count < 120:
            a = random_rf(rng, rational=True)
            b = random_rf(rng, rational=True)
            pt = rng.choice(pts)
            try:
                av, bv = a.eval(pt), b.eval(pt)
            except PoleAtParameter:
                continue
            assert (a * b).eval(pt) == av * bv
            assert (a + b).eval(pt) == av + bv
            count += 1


class TestSolveLinear:
    def test_identity(self):
        sol = solve_linear([[rf(1), rf(0)], [rf(0), rf(1)]], [ALPHA, rf(1)])
        assert sol.consistent
        assert sol.particular == (ALPHA, rf(1))
        assert sol.nullspace == ()

    def test_field_has_no_zero_divisors(self):
        sol = solve_linear([[S]], [rf(0)])
        assert sol.consistent
        assert sol.particular == (rf(0),)
        assert sol.nullspace == ()

    def test_rank_one_nullspace(self):
        a = [[rf(1), ALPHA], [rf(2), rf(2) * ALPHA]]
        sol = solve_linear(a, [rf(0), rf(0)])
        assert sol.consistent
        assert sol.nullspace == ((-ALPHA, rf(1)),)

    def test_inconsistent_is_reported(self):
        sol = solve_linear([[rf(1)], [rf(1)]], [rf(0), rf(1)])
        assert not sol.consistent
        assert sol.particular is None

    def test_solution_properties_random(self):
        rng = random.Random(17)
        for _ in range(60):
            n, m = rng.randint(1, 3), rng.randint(1, 4)
            a = [[random_rf(rng) for _ in range(m)] for _ in range(n)]
            b = [random_rf(rng) for _ in range(n)]
            sol = solve_linear(a, b)
            if sol.consistent:
                for i in range(n):
                    acc = rf(0)
                    for j in range(m):
                        acc = acc + a[i][j] * sol.particular[j]
                    assert acc == b[i]
                for vec in sol.nullspace:
                    for i in range(n):
                        acc = rf(0)
                        for j in range(m):
                            acc = acc + a[i][j] * vec[j]
                        assert acc.is_zero


class TestSerialization:
    def test_json_round_trip(self):
        rng = random.Random(19)
        for _ in range(100):
            x = random_rf(rng, rational=True)
            assert RationalFunction.from_json(x.to_json()) == x

    def test_decimal_strings(self):
        x = rf(Fraction(10**40, 3))
        data = x.to_json()
        assert data["num"] == [f"{10**40}/3"]
        assert RationalFunction.from_json(data) == x
