"""Tests for the exponentiation and short-time combinatorics."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import factorial

import pytest

from fpgreen.seriescomb import (
    INV_SEP,
    AbstractSeriesPoly,
    double_factorial,
    gen_b,
    gen_b_g,
    gen_g,
)

A = AbstractSeriesPoly.symbol

# exact order-8 coefficient list for the constant-drift example, X = x - y:
# odd entries carry one factor of X, even entries are pure numbers
EX1_A = {
    1: (Fraction(1), True),
    2: (Fraction(-2), False),
    3: (Fraction(-1), True),
    4: (Fraction(4), False),
    5: (Fraction(2), True),
    6: (Fraction(-32, 3), False),
    7: (Fraction(-5), True),
    8: (Fraction(32), False),
}


def ex1_values(X: Fraction) -> dict[int, Fraction]:
    return {n: c * (X if odd else 1) for n, (c, odd) in EX1_A.items()}


def brute_force_b(n: int) -> AbstractSeriesPoly:
    """Independent route: sum over ordered index tuples with 1/m!."""
    out = AbstractSeriesPoly.zero() if n else AbstractSeriesPoly.one()
    for m in range(1, n + 1):
        for combo in product(range(1, n + 1), repeat=m):
            if sum(combo) != n:
                continue
            term = AbstractSeriesPoly.one() * Fraction(1, factorial(m))
            for j in combo:
                term = term * A(j)
            out = out + term
    return out


class TestGenB:
    def test_b0_b1(self):
        assert gen_b(0) == AbstractSeriesPoly.one()
        assert gen_b(1) == A(1)

    def test_b2_golden(self):
        assert gen_b(2) == A(2) + A(1) * A(1) * Fraction(1, 2)

    def test_matches_brute_force(self):
        for n in range(0, 8):
            assert gen_b(n) == brute_force_b(n), n

    def test_example1_numeric(self):
        X = Fraction(1)
        vals = ex1_values(X)
        assert gen_b(2).evaluate(vals) == Fraction(-3, 2)
        assert gen_b(4).evaluate(vals) == Fraction(6) - 2 + Fraction(1, 24)


class TestDoubleFactorial:
    def test_values(self):
        assert [double_factorial(n) for n in (1, 3, 5, 7)] == [1, 3, 15, 105]


class TestGenG:
    def test_example1_collapses_to_exponential(self):
        # the inverse-separation powers must cancel, leaving (-1)^n / n!
        for X in (Fraction(7, 10), Fraction(1, 3), Fraction(-2)):
            vals = ex1_values(X)
            for n in range(1, 7):
                got = gen_g(n).evaluate(vals, inv_sep=1 / X)
                assert got == Fraction((-1) ** n, factorial(n)), (n, X)

    def test_diagonal_divisor(self):
        b2, g2, divisor = gen_b_g(2)
        assert divisor == 12  # 2^2 * 3!!

    def test_example1_diagonal(self):
        # on the diagonal the odd coefficients vanish and X drops out
        vals = {n: (Fraction(0) if odd else c) for n, (c, odd) in EX1_A.items()}
        b4 = gen_b(4).evaluate(vals)
        assert b4 == 6
        _, _, divisor = gen_b_g(2)
        assert b4 / divisor == Fraction(1, 2)

    def test_inv_sep_required(self):
        with pytest.raises(ValueError):
            gen_g(1).evaluate({1: Fraction(1)})

    def test_uses_only_low_symbols(self):
        assert gen_g(3).max_index() == 3


class TestDiagonalConsistency:
    """Symbolic diagonal limit agrees with the closed diagonal formula."""

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_parabolic_drift_limit(self, n):
        sympy = pytest.importorskip("sympy")
        x, h = sympy.symbols("x h")
        y = x - h

        # exact coefficients for the drift f(z) = -z, computed from the
        # jet polynomials: odd orders integrate a polynomial density,
        # even orders are pointwise
        from fpgreen.coeffs import gen_alpha, gen_s
        from fpgreen.diffpoly import Basis

        z = sympy.symbols("z")
        jet = [-z, sympy.Integer(-1)] + [sympy.Integer(0)] * 10

        def a_val(m, at_x, at_y):
            if m % 2:
                dens = gen_s(m + 1).evaluate(jet)
                return -sympy.integrate(dens, (z, at_y, at_x))
            alpha = gen_alpha(m).evaluate(jet)
            return alpha.subs(z, at_x) + alpha.subs(z, at_y)

        avals = {m: a_val(m, x, y) for m in range(1, 2 * n + 1)}
        g_off = gen_g(n).evaluate(avals, inv_sep=1 / h)
        limit = sympy.limit(sympy.expand(g_off), h, 0)

        diag_vals = {
            m: (sympy.Integer(0) if m % 2 else 2 * gen_alpha(m).evaluate(jet).subs(z, x))
            for m in range(1, 2 * n + 1)
        }
        b2n = gen_b(2 * n).evaluate(diag_vals)
        _, _, divisor = gen_b_g(n)
        closed = b2n / divisor
        assert sympy.simplify(limit - closed) == 0
