"""End-to-end acceptance checks, one test per shipped guarantee.

Each test is independent and prints a single pass/fail line under
``pytest -v``; the whole module stays well under the five-minute budget.
"""

from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction

import pytest
import sympy

from fpgreen.closedform import exact_GF_time, exact_logG
from fpgreen.coeffs import gen_alpha, gen_s, vs_to_f
from fpgreen.diffpoly import Basis, DiffPoly, dpoly_dx
from fpgreen.engine import (
    coeff_a,
    expansion_series,
    partial_sum_terms,
    shorttime_GF,
)
from fpgreen.potential import builtin
from fpgreen.remainder import remainder_report
from fpgreen.riccati import OracleConfig, finite_scattering, oracle_logG, semi_infinite_S
from fpgreen.seriescomb import gen_g
from fpgreen.validity import Regime, classify_validity
from fpgreen.xipoly import XiPoly, gen_K, gen_c_tilde

F = DiffPoly.jet_var
f, fp, fpp, fppp, f4 = F(0), F(1), F(2), F(3), F(4)
V = DiffPoly.jet_var(0, Basis.VS_BASIS)
Vp = DiffPoly.jet_var(1, Basis.VS_BASIS)
Vpp = DiffPoly.jet_var(2, Basis.VS_BASIS)
Vppp = DiffPoly.jet_var(3, Basis.VS_BASIS)

FAST = OracleConfig(l_start=10.0, tol=1e-8, rtol=1e-9, atol=1e-11)


def _xp(*slots):
    return XiPoly(list(slots), Basis.F_BASIS)


def test_01_symbolic_golden_tables():
    assert gen_c_tilde(1) == _xp(-f)
    assert gen_c_tilde(2) == _xp(-fp, f * f)
    assert gen_c_tilde(3) == _xp(-fpp + f**3, 2 * f * fp, -(f**3))
    assert gen_c_tilde(4) == _xp(
        -fppp + 5 * f**2 * fp,
        -(2 * f**4 - fp**2 - 2 * f * fpp),
        -3 * f**2 * fp,
        f**4,
    )

    assert gen_K(0) == _xp(f)
    assert gen_K(1) == _xp(fp, -2 * f * f)
    assert gen_K(2) == _xp(fpp - f**3, -4 * f * fp, 3 * f**3)
    assert gen_K(3) == _xp(
        fppp - 5 * f**2 * fp,
        2 * (2 * f**4 - fp**2 - 2 * f * fpp),
        9 * f**2 * fp,
        -4 * f**4,
    )

    assert gen_s(1) == -f
    assert gen_s(2) == -fp - f**2
    assert gen_s(3) == -fpp - 2 * f * fp
    assert gen_s(4) == -fppp - 2 * f * fpp - fp**2 + 2 * f**2 * fp + f**4
    assert gen_s(5) == (
        -f4 - 2 * f * fppp - 2 * fp * fpp
        + 4 * f**2 * fpp + 8 * f * fp**2 + 8 * f**3 * fp
    )

    assert gen_alpha(2) == -fp - f**2

    assert gen_s(2, Basis.VS_BASIS) == -V
    assert gen_s(3, Basis.VS_BASIS) == -Vp
    assert gen_s(4, Basis.VS_BASIS) == V**2 - Vpp
    assert gen_s(5, Basis.VS_BASIS) == 4 * V * Vp - Vppp

    # a_n building blocks in the Schrodinger basis: a_1 = -int s_2,
    # a_2 = alpha_2 at both ends, a_3 = -int s_4, a_4 = alpha_4 at both ends
    assert gen_alpha(2, Basis.VS_BASIS) == -V
    assert gen_alpha(4, Basis.VS_BASIS) == 2 * V**2 - Vpp


def test_02_route_equivalence():
    for n in range(2, 13):
        assert gen_s(n) == vs_to_f(gen_s(n, Basis.VS_BASIS)), n
    for i in range(1, 6):
        assert dpoly_dx(gen_alpha(2 * i)) == gen_s(2 * i + 1), i


def test_03_alpha4_adjudication():
    generated = gen_alpha(4)
    assert generated == 2 * f**4 + 4 * f**2 * fp - 2 * f * fpp - fppp
    assert vs_to_f(gen_alpha(4, Basis.VS_BASIS)) == generated
    # the variant with the opposite third-derivative sign is inconsistent
    variant = 2 * f**4 + 4 * f**2 * fp - 2 * f * fpp + fppp
    assert generated != variant
    assert dpoly_dx(variant) != gen_s(5)


def test_04_constant_drift_end_to_end():
    jet = [Fraction(-1)] + [Fraction(0)] * 8

    def odd_a(n, sep):
        return -sep * gen_s(n + 1, force=True).evaluate(jet)

    def even_a(n):
        return 2 * gen_alpha(n, force=True).evaluate(jet)

    for sep in (Fraction(3, 2), Fraction(7, 5)):
        assert odd_a(1, sep) == sep
        assert even_a(2) == -2
        assert odd_a(3, sep) == -sep
        assert even_a(4) == 4

    spec = builtin("ex1")
    x, y = 0.1, 0.0
    k = 2 * cmath.exp(1j * math.pi / 4)
    series = expansion_series(x, y, 8, spec)
    leading, terms = partial_sum_terms(series, k)
    exact = exact_logG("ex1", x, y, k, im_ref=leading.imag)
    deltas = []
    partial = leading
    for term in terms:
        partial += term
        deltas.append(abs(exact - partial))
    assert all(a > b for a, b in zip(deltas, deltas[1:]))
    assert deltas[-1] < 1e-4


def test_05_linear_drift_regimes():
    spec = builtin("ex2")
    sector = remainder_report(spec, 2.0, -1.0, 8, "sector:pi/4", [4.0, 16.0])
    ratio = sector.samples[0].scaled_abs / sector.samples[1].scaled_abs
    assert ratio >= 10

    # pole-free real wavenumbers: midpoints between consecutive poles
    mags = [
        (math.sqrt(2 * n) + math.sqrt(2 * n + 2)) / 2
        for n in (8, 10, 12, 14, 18, 22, 26, 32, 38, 44, 52, 60)
    ]
    real = remainder_report(spec, 1.0, 0.0, 0, "real", mags, oracle="closed-form")
    assert real.trend in ("finite-limit", "divergent")


def test_06_jump_corrections():
    five = expansion_series(0.8, -0.6, 3, builtin("ex5"), corrected=True, force=True)
    assert five.coefficient(2, corrected=True) == 0.0
    sep = 0.8 - (-0.6)
    assert five.coefficient(1, corrected=True) == pytest.approx(sep - 2, abs=1e-13)
    assert five.coefficient(3, corrected=True) == pytest.approx(
        -sep + 4.0 / 3.0, abs=1e-13
    )

    six = builtin("ex6")
    x, y = 0.5, -0.5
    e = math.exp
    expected = (
        (-e(2 * y) + 4 * e(y) + 2 * x - 3) / 8,
        -(e(2 * y) - 2 * e(y) + 1) / 4,
        (3 * e(4 * y) - 16 * e(3 * y) - 72 * e(2 * y) + 96 * e(y) - 12 * x - 11) / 192,
        (e(4 * y) - 4 * e(3 * y) - 4 * e(2 * y) + 4 * e(y) + 1) / 8,
    )
    for n, want in enumerate(expected, start=1):
        assert coeff_a(n, x, y, six, force=True) == pytest.approx(want, abs=1e-12)

    kink = remainder_report(six, x, y, 4, "real", [10.0, 14.0, 20.0, 28.0, 40.0])
    assert kink.samples[-1].scaled_abs == pytest.approx(0.0078125, rel=0.10)

    seven = remainder_report(builtin("ex7"), x, y, 4, "real", [10.0, 20.0, 40.0])
    assert seven.samples[-1].scaled_abs == pytest.approx(0.0020, rel=0.15)

    inner = remainder_report(six, 0.9, 0.4, 2, "real", [10.0, 20.0, 40.0])
    assert inner.trend != "vanishing"
    assert inner.samples[-1].scaled_abs > 0.05


def test_07_short_time():
    jet = [Fraction(-1)] + [Fraction(0)] * 8

    def a_exact(n, sep):
        if n % 2:
            return -sep * gen_s(n + 1, force=True).evaluate(jet)
        return 2 * gen_alpha(n, force=True).evaluate(jet)

    for sep in (Fraction(3, 2), Fraction(7, 5)):
        values = {n: a_exact(n, sep) for n in range(1, 7)}
        for n in range(1, 7):
            got = gen_g(n).evaluate(values, inv_sep=1 / sep)
            assert got == Fraction((-1) ** n, math.factorial(n)), n

    xs, ys, zz = sympy.symbols("xs ys zz")
    jets = [-zz, sympy.Integer(-1)] + [sympy.Integer(0)] * 7

    def a_sym(n):
        if n % 2:
            body = gen_s(n + 1, force=True).evaluate(jets)
            return -sympy.integrate(body, (zz, ys, xs))
        alpha = gen_alpha(n, force=True)
        return alpha.evaluate([-xs] + jets[1:]) + alpha.evaluate([-ys] + jets[1:])

    values = {n: a_sym(n) for n in range(1, 4)}
    w = xs**2 + xs * ys + ys**2
    table = {
        1: 1 - w / 3,
        2: sympy.Rational(1, 6) - w / 3 + w**2 / 18,
        3: (
            sympy.Rational(-1, 6) + xs * ys / 15 + w / 30 + w**2 / 18 - w**3 / 162
        ),
    }
    for n in range(1, 4):
        got = gen_g(n).evaluate(values, inv_sep=1 / (xs - ys))
        assert sympy.simplify(got - table[n]) == 0, n

    spec = builtin("ex2")
    for order in (1, 2, 3):
        errs = [
            abs(shorttime_GF(1.0, 0.0, t, order, spec) - exact_GF_time("ex2", 1.0, 0.0, t))
            / exact_GF_time("ex2", 1.0, 0.0, t)
            for t in (0.2, 0.1)
        ]
        ratio = errs[0] / errs[1]
        assert 2 ** (order + 1) * 0.6 <= ratio <= 2 ** (order + 1) * 1.4, order


def test_08_oracle_integrity():
    k = 1.5 + 1j
    h = 1e-4
    for name, points in (("ex2", (-0.8, 0.3, 1.1)), ("ex4", (-0.5, 0.2, 0.9))):
        spec = builtin(name)
        for x in points:
            lo = semi_infinite_S(x - h, k, spec, FAST)
            hi = semi_infinite_S(x + h, k, spec, FAST)
            mid = semi_infinite_S(x, k, spec, FAST)
            dlog = (
                cmath.log(1 - (hi.s_r + hi.s_l)) - cmath.log(1 - (lo.s_r + lo.s_l))
            ) / (2 * h)
            residual = -0.5 * dlog - (spec.drift(x) + 1j * k * (mid.s_r - mid.s_l))
            assert abs(residual) < 1e-6, (name, x)

    ex4 = builtin("ex4")
    triple = finite_scattering(0.3, 0.3, 2 + 1j, ex4)
    assert (triple.tau, triple.r_r, triple.r_l) == (1 + 0j, 0j, 0j)
    refl = [abs(finite_scattering(0.0, 6.0, kk, ex4).r_r) for kk in (10.0, 20.0, 40.0)]
    assert 0.3 < refl[1] / refl[0] < 0.7
    assert 0.3 < refl[2] / refl[1] < 0.7
    phase = [
        abs(finite_scattering(0.0, 6.0, kk, ex4).tau * cmath.exp(-6j * kk) - 1)
        for kk in (10.0, 20.0, 40.0)
    ]
    assert phase[0] > phase[1] > phase[2]

    for name, x, y in (("ex1", 0.7, -0.4), ("ex5", 0.8, -0.6)):
        spec = builtin(name)
        for kk in (2j, 1 + 1j, 3 * cmath.exp(1j * math.pi / 4)):
            got = oracle_logG(x, y, kk, spec, FAST)
            exact = exact_logG(name, x, y, kk, im_ref=got.log_g.imag)
            assert abs(got.log_g - exact) < 1e-7, (name, kk)

    trend = remainder_report(
        ex4, 0.5, 0.0, 4, "real", [6.0, 8.0, 10.0, 12.0], oracle="riccati", cfg=FAST
    )
    scaled = [s.scaled_abs for s in trend.samples]
    assert all(a > b for a, b in zip(scaled, scaled[1:]))
    assert scaled[-1] < scaled[0] / 1.8


def test_09_classifier_conformance():
    def caps(spec, x, y):
        reports = classify_validity(spec, x, y)
        return tuple(
            reports[r].max_order
            for r in (Regime.SECTOR, Regime.HALF_PLANE, Regime.REAL_AXIS)
        )

    assert caps(builtin("ex1"), 1.0, 0.0) == (None, None, None)
    assert caps(builtin("ex2"), 1.0, 0.0) == (None, None, 0)
    assert caps(builtin("ex3"), 1.0, 0.0) == (None, 0, 0)
    assert caps(builtin("ex4"), 1.0, 0.0) == (None, None, None)
    assert caps(builtin("ex5"), 0.5, -1.0) == (1, 1, 1)
    assert caps(builtin("ex5"), 1.5, 0.5) == (None, 0, 0)
    assert caps(builtin("ex6"), 0.5, -1.0) == (3, 3, 3)
    assert caps(builtin("ex6"), 1.5, 0.5) == (None, 1, 1)
    assert caps(builtin("ex7"), 0.5, -0.5) == (3, 3, 3)
    assert caps(builtin("ex7"), 0.8, 0.2) == (None, 1, 1)
    assert caps(builtin("ex8"), 1.0, -1.0) == (5, 5, 0)
    assert caps(builtin("ex8"), 2.0, 1.0) == (None, 2, 0)

    assert classify_validity(builtin("ex5"), 0.5, -1.0)[
        Regime.SECTOR
    ].corrections == ((2, 2.0),)
    assert classify_validity(builtin("ex6"), 0.5, -1.0)[
        Regime.REAL_AXIS
    ].corrections == ((4, -0.125),)
    assert classify_validity(builtin("ex8"), 1.0, -1.0)[
        Regime.HALF_PLANE
    ].corrections == ((6, 2.0),)

    rng = random.Random(114)
    names = ["ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "ex7", "ex8"]
    for _ in range(12):
        for name in names:
            spec = builtin(name)
            y = rng.uniform(-3, 2.9)
            x = y + rng.uniform(0.05, 3)
            if any(loc in (x, y) for loc in (r.location for r in spec.jumps)):
                continue
            reports = classify_validity(spec, x, y)
            sector = reports[Regime.SECTOR].max_order_value
            half = reports[Regime.HALF_PLANE].max_order_value
            real = reports[Regime.REAL_AXIS].max_order_value
            assert real <= half <= sector, (name, x, y)
