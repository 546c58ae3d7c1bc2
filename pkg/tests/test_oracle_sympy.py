"""Cross-checks against an independent sympy implementation.

The core operations (total derivative, Euler operator, directional
derivative, bracket) are re-implemented here from their definitions
using sympy jets and compared with the exact engine on random inputs.
"""

import random

import pytest

sympy = pytest.importorskip("sympy")
import sympy as sp

from jetsym.jetalgebra import (DiffPoly, T_GEN, X_GEN, jet, jet_depvar,
                               jet_order)
from jetsym.varcalc import commutator, euler_operator, frechet

NORD = 9
ALPHA = sp.Symbol("alpha")
XS, TS = sp.Symbol("x"), sp.Symbol("t")
WS = sp.symbols(f"w0:{NORD}")
ZS = sp.symbols(f"z0:{NORD}")


def to_sympy(f: DiffPoly):
    acc = sp.Integer(0)
    for mono, coeff in f.terms.items():
        num = sp.Poly(reversed([sp.Rational(c) for c in coeff.num.coeffs or (0,)]),
                      ALPHA).as_expr()
        den = sp.Poly(reversed([sp.Rational(c) for c in coeff.den.coeffs]),
                      ALPHA).as_expr()
        term = num / den
        for g, e2 in mono:
            if g == X_GEN:
                base = XS
            elif g == T_GEN:
                base = TS
            else:
                base = (WS if jet_depvar(g) == 0 else ZS)[jet_order(g)]
            term *= base ** sp.Rational(e2, 2)
        acc += term
    return acc


def sym_dx(e):
    out = sp.diff(e, XS)
    for i in range(NORD - 1):
        out += sp.diff(e, WS[i]) * WS[i + 1] + sp.diff(e, ZS[i]) * ZS[i + 1]
    return sp.expand(out)


def sym_euler(e, which):
    gens = WS if which == 0 else ZS
    out = sp.Integer(0)
    for i in range(NORD):
        d = sp.diff(e, gens[i])
        for _ in range(i):
            d = sym_dx(d)
        out += (-1) ** i * d
    return sp.expand(out)


def sym_frechet(e, k1, k2):
    out = sp.Integer(0)
    d1, d2 = [k1], [k2]
    for _ in range(NORD - 1):
        d1.append(sym_dx(d1[-1]))
        d2.append(sym_dx(d2[-1]))
    for i in range(NORD):
        out += sp.diff(e, WS[i]) * d1[i] + sp.diff(e, ZS[i]) * d2[i]
    return sp.expand(out)


def assert_sym_zero(expr):
    assert sp.simplify(sp.together(expr)) == 0


from conftest import random_diffpoly, random_evofield


class TestAgainstSympy:
    def test_total_derivative(self):
        rng = random.Random(101)
        for _ in range(25):
            f = random_diffpoly(rng, with_xt=True, rational=True)
            assert_sym_zero(to_sympy(f.dx()) - sym_dx(to_sympy(f)))

    def test_euler_operator(self):
        rng = random.Random(103)
        for _ in range(25):
            f = random_diffpoly(rng, max_order=3, terms=4)
            for d in (0, 1):
                assert_sym_zero(to_sympy(euler_operator(f, d))
                                - sym_euler(to_sympy(f), d))

    def test_frechet(self):
        rng = random.Random(107)
        for _ in range(20):
            f = random_diffpoly(rng)
            k = random_evofield(rng)
            got = to_sympy(frechet(f, k))
            want = sym_frechet(to_sympy(f), to_sympy(k[0]), to_sympy(k[1]))
            assert_sym_zero(got - want)

    def test_commutator(self):
        rng = random.Random(109)
        for _ in range(10):
            f = random_evofield(rng, max_order=1, terms=2)
            g = random_evofield(rng, max_order=1, terms=2)
            got = commutator(f, g)
            for c in range(2):
                want = (sym_frechet(to_sympy(g[c]), to_sympy(f[0]), to_sympy(f[1]))
                        - sym_frechet(to_sympy(f[c]), to_sympy(g[0]), to_sympy(g[1])))
                assert_sym_zero(to_sympy(got[c]) - want)

    def test_half_exponent_derivative(self):
        u_sqrt = DiffPoly.gen_power(jet(0, 0), 1)
        got = to_sympy(u_sqrt.dx())
        want = sym_dx(sp.sqrt(WS[0]))
        assert_sym_zero(got - want)
