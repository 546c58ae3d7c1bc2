"""Operator terms, matrices, their application, and text round trips."""

import random

import pytest

from jetsym.coeffield import AlphaPoly, RationalFunction, rf
from jetsym.errors import NonlocalObstruction
from jetsym.hierarchy import fs_seed, recursion_matrix, second_recursion_matrix
from jetsym.jetalgebra import DiffPoly, EvoField, jet
from jetsym.operators import (OperatorMatrix, OpTerm, apply_term,
                              parse_entry, parse_matrix, render_entry)
from jetsym.systems import builtin_system, parse_expression

from conftest import random_evofield


def fs_expr(src):
    return parse_expression(src, ("w", "z"), "alpha")


class TestApplyTerm:
    def test_nonlocal_coefficient_action(self):
        t = OpTerm(fs_expr("4*w_x"), -1)
        assert apply_term(t, fs_expr("w_x")) == fs_expr("4*w*w_x")

    def test_plain_derivative(self):
        t = OpTerm(DiffPoly.constant(1), 1)
        assert apply_term(t, fs_expr("w_x")) == fs_expr("w_xx")

    def test_obstruction_carries_remainder(self):
        t = OpTerm(DiffPoly.constant(1), -1)
        with pytest.raises(NonlocalObstruction) as exc:
            apply_term(t, fs_expr("w_x^2"))
        from jetsym.varcalc import euler_operator
        assert euler_operator(exc.value.remainder, 0) == fs_expr("-2*w_xx")

    def test_power_validation(self):
        with pytest.raises(ValueError):
            OpTerm(DiffPoly.constant(1), -2)


class TestApplyMatrix:
    def test_rec_first_row_on_seed(self):
        k1, _ = fs_seed()
        rec = recursion_matrix()
        out = rec.apply(k1)
        assert out[0] == fs_expr("w_xx + 8*w*w_x")

    def test_zero_matrix(self):
        _, k2 = fs_seed()
        zero = OperatorMatrix([[(), ()], [(), ()]])
        assert zero.apply(k2).is_zero

    def test_second_recursion_matrix_second_component_on_seed(self):
        k1, _ = fs_seed()
        m = second_recursion_matrix()
        out = m.apply(k1)
        s = AlphaPoly((-1, 2))
        alpha = AlphaPoly((0, 1))
        two_a_over_s = RationalFunction(AlphaPoly((0, 2)), s)
        comp = out[1]
        assert comp.coefficient(
            tuple(sorted([(jet(1, 0), 2), (jet(0, 2), 2)]))) == two_a_over_s
        assert comp.coefficient(
            tuple(sorted([(jet(0, 0), 2), (jet(1, 0), 2), (jet(0, 1), 2)]))) \
            == RationalFunction(AlphaPoly((0, 24)), s)
        assert comp.coefficient(
            tuple(sorted([(jet(0, 0), 6), (jet(1, 0), 2)]))) \
            == RationalFunction(AlphaPoly((0, 32)), s)
        assert comp.coefficient(
            tuple(sorted([(jet(0, 0), 2), (jet(1, 0), 6)]))) == rf(-4)
        assert comp.coefficient(
            tuple(sorted([(jet(1, 0), 4), (jet(1, 1), 2)]))) == rf(-2)

    def test_obstruction_names_entry(self):
        rec = recursion_matrix()
        bad = EvoField((fs_expr("w_x^2"), fs_expr("z_x")))
        with pytest.raises(NonlocalObstruction) as exc:
            rec.apply(bad)
        assert exc.value.entry == (0, 0)

    def test_linearity(self):
        rng = random.Random(83)
        rec = recursion_matrix()
        for _ in range(30):
            k = random_evofield(rng, max_order=1, terms=2)
            l = random_evofield(rng, max_order=1, terms=2)
            # make first components exact so Dinv applies
            k = EvoField((k[0].dx(), k[1]))
            l = EvoField((l[0].dx(), l[1]))
            a, b = rf(3), rf(-2)
            lhs = rec.apply(k.scalar_mul(a) + l.scalar_mul(b))
            rhs = rec.apply(k).scalar_mul(a) + rec.apply(l).scalar_mul(b)
            assert lhs == rhs

    def test_dinv_local_consistency(self):
        rng = random.Random(89)
        from jetsym.varcalc import integrate_dx
        for _ in range(50):
            k = random_evofield(rng, max_order=1, terms=3)
            f = k[0].dx()
            cert = integrate_dx(f)
            assert cert.is_exact
            assert cert.antiderivative.dx() == f


class TestTextRoundTrip:
    def test_entry_render_parse(self):
        fs = builtin_system("fs")
        entry = (OpTerm(DiffPoly.constant(1), 1),
                 OpTerm(fs_expr("4*w"), 0),
                 OpTerm(fs_expr("4*w_x"), -1))
        text = render_entry(entry, fs)
        assert parse_entry(text, fs) == entry

    def test_builtin_matrices_round_trip(self):
        fs = builtin_system("fs")
        for m in (recursion_matrix(), second_recursion_matrix()):
            assert parse_matrix(m.text(fs), fs) == m

    def test_rational_coefficients_round_trip(self):
        fs = builtin_system("fs")
        coeff = fs_expr("z").scalar_mul(
            RationalFunction(AlphaPoly((0, 2)), AlphaPoly((-1, 2))))
        entry = (OpTerm(coeff, 1),)
        assert parse_entry(render_entry(entry, fs), fs) == entry
