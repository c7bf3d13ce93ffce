"""Tests for the exact differential-polynomial algebra."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpgreen.diffpoly import Basis, DiffPoly, dpoly_dx
from fpgreen.errors import BasisError

F = DiffPoly.jet_var


def poly_from(terms):
    return DiffPoly(terms)


@st.composite
def small_polys(draw, basis=Basis.F_BASIS):
    n_terms = draw(st.integers(0, 4))
    terms = {}
    for _ in range(n_terms):
        mon = tuple(draw(st.lists(st.integers(0, 3), max_size=3)))
        coeff = Fraction(draw(st.integers(-9, 9)), draw(st.integers(1, 5)))
        terms[mon] = terms.get(mon, Fraction(0)) + coeff
    return DiffPoly(terms, basis)


class TestArithmetic:
    def test_zero_coefficients_dropped(self):
        p = DiffPoly({(0,): 1}) - DiffPoly({(0,): 1})
        assert p.is_zero()
        assert p.terms == {}

    def test_exact_rational(self):
        p = DiffPoly({(1,): Fraction(1, 3)}) * 3
        assert p == F(1)

    def test_product_merges_monomials(self):
        # (f + f')^2 = f^2 + 2 f f' + f'^2
        p = (F(0) + F(1)) ** 2
        assert p == DiffPoly({(0, 0): 1, (0, 1): 2, (1, 1): 1})

    def test_equality_requires_same_basis(self):
        assert F(0, Basis.F_BASIS) != F(0, Basis.VS_BASIS)

    def test_mixing_bases_raises(self):
        with pytest.raises(BasisError):
            F(0, Basis.F_BASIS) + F(0, Basis.VS_BASIS)
        with pytest.raises(BasisError):
            F(0, Basis.F_BASIS) * F(0, Basis.VS_BASIS)

    def test_scalar_ops(self):
        p = 2 * F(0) - Fraction(1, 2)
        assert p.coefficient((0,)) == 2
        assert p.coefficient(()) == Fraction(-1, 2)
        assert (p / 2).coefficient((0,)) == 1


class TestDerivative:
    def test_leibniz_square(self):
        assert dpoly_dx(F(0) ** 2) == 2 * F(0) * F(1)

    def test_s2_to_s3(self):
        s2 = -F(1) - F(0) ** 2
        s3 = -F(2) - 2 * F(0) * F(1)
        assert dpoly_dx(s2) == s3

    def test_zero(self):
        assert dpoly_dx(DiffPoly.zero()).is_zero()

    def test_constant_killed(self):
        assert dpoly_dx(DiffPoly.constant(7)).is_zero()

    @given(small_polys(), small_polys())
    @settings(max_examples=60, deadline=None)
    def test_product_rule(self, p, q):
        assert dpoly_dx(p * q) == dpoly_dx(p) * q + p * dpoly_dx(q)

    @given(small_polys(), small_polys())
    @settings(max_examples=60, deadline=None)
    def test_linearity(self, p, q):
        assert dpoly_dx(p + q) == dpoly_dx(p) + dpoly_dx(q)


class TestEvaluate:
    def test_exact_fraction_jet(self):
        p = -F(1) - F(0) ** 2  # -f' - f^2
        assert p.evaluate([Fraction(-1), Fraction(0)]) == -1

    def test_float_jet(self):
        p = F(0) * F(2) + 3
        assert p.evaluate([2.0, 0.0, 5.0]) == pytest.approx(13.0)

    def test_complex_jet(self):
        p = F(0) ** 2
        assert p.evaluate([1j]) == pytest.approx(-1.0)

    def test_short_jet_rejected(self):
        with pytest.raises(ValueError):
            F(3).evaluate([1.0])


class TestSubstitution:
    def test_vs_link(self):
        # V = f^2 + f'; V' = 2 f f' + f''
        v = DiffPoly.jet_var(0, Basis.VS_BASIS)
        base = F(0) ** 2 + F(1)
        assert v.subs(base) == base
        assert dpoly_dx(v).subs(base) == dpoly_dx(base)

    @given(small_polys(Basis.VS_BASIS))
    @settings(max_examples=40, deadline=None)
    def test_subs_commutes_with_derivative(self, p):
        base = F(0) ** 2 + F(1)
        assert dpoly_dx(p.subs(base)) == dpoly_dx(p).subs(base)


class TestRender:
    def test_zero(self):
        assert DiffPoly.zero().render() == "0"

    def test_constant(self):
        assert DiffPoly.constant(Fraction(-3, 2)).render() == "-3/2"

    def test_signs_and_powers(self):
        p = -F(3) - 2 * F(0) * F(2) - F(1) ** 2 + 2 * F(0) ** 2 * F(1) + F(0) ** 4
        assert p.render() == "-f3 - 2*f0*f2 - f1^2 + 2*f0^2*f1 + f0^4"

    def test_vs_symbol(self):
        v = DiffPoly.jet_var(0, Basis.VS_BASIS)
        assert (v * v - dpoly_dx(dpoly_dx(v))).render() == "V0^2 - V2"

    def test_fraction_coefficient(self):
        assert (Fraction(4, 3) * F(0) ** 3).render() == "4/3*f0^3"
