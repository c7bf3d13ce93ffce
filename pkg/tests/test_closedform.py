"""Closed-form Green functions, special functions, and time kernels."""

from __future__ import annotations

import cmath
import math

import pytest

from fpgreen.closedform import (
    BESSEL_K_BUDGET,
    CLOSED_FORM_IDS,
    closed_form_available,
    exact_GF_time,
    exact_green,
    exact_logG,
)
from fpgreen.errors import EvaluationDomainError, UnsupportedDomainError
from fpgreen.potential import builtin
from fpgreen.riccati import OracleConfig, oracle_logG
from fpgreen.specialfn import SpecialKind, special_eval

FAST = OracleConfig(l_start=10.0, tol=1e-8, rtol=1e-9, atol=1e-11)

K45 = 2 * cmath.exp(1j * math.pi / 4)

# regression anchors; every value was cross-validated against the ODE oracle
FROZEN_GREEN = [
    ("ex1", 0.7, -0.4, 2 + 1j, -0.09733802348765887 + 0.2956315822783607j),
    ("ex2", 1.0, 0.0, K45, 5.242882739947296e-05 + 0.2796436912180246j),
    ("ex3", 0.5, -0.5, 1.5 + 1j, -0.00856611297976898 + 0.4029472032580967j),
    ("ex4", 0.5, 0.0, 6.0 + 0j, -0.9835075857767668 + 0.10424518386664676j),
    ("ex5", 0.8, -0.6, 2 + 1j, -0.25521974691522425 + 0.05748381324302419j),
    ("ex6", 0.5, -0.5, 10.0 + 0j, -0.839346719448691 - 0.5437747371688718j),
    ("ex6", 0.9, 0.4, 10.0 + 0j, 0.2768602623839989 - 0.9623907651093047j),
    ("ex7", 0.5, -0.5, 1 + 1j, 0.202443194928709 + 0.3010428942484794j),
]


class TestExactGreen:
    def test_constant_drift_analytic_value(self):
        # for constant drift, G = k/sqrt(k^2-1) * exp(i sqrt(k^2-1) (x-y))
        k = 2.0
        root = math.sqrt(3.0)
        expected = (2.0 / root) * cmath.exp(1j * root * 1.0)
        assert abs(exact_green("ex1", 1.0, 0.0, k) - expected) < 1e-12

    @pytest.mark.parametrize("name,x,y,k,value", FROZEN_GREEN)
    def test_frozen_values(self, name, x, y, k, value):
        got = exact_green(name, x, y, k)
        assert abs(got - value) < 1e-10 * max(1.0, abs(value))

    def test_log_branch_alignment(self):
        base = exact_logG("ex1", 1.0, 0.0, 2.0)
        shifted = exact_logG("ex1", 1.0, 0.0, 2.0, im_ref=base.imag + 2 * math.pi)
        assert abs(shifted - base - 2j * math.pi) < 1e-12
        unshifted = exact_logG("ex1", 1.0, 0.0, 2.0, im_ref=base.imag + 0.5)
        assert abs(unshifted - base) < 1e-12


class TestDualRoute:
    """Closed forms and the ODE oracle are fully independent routes."""

    CASES = [
        ("ex2", 1.0, 0.0, K45),
        ("ex3", 0.5, -0.5, 1.5 + 1j),
        ("ex4", 0.5, 0.0, 1.2 + 0j),
        ("ex6", 0.5, -0.5, 1.3 + 0.9j),
        ("ex6", 0.9, 0.4, 1.3 + 0.9j),
        ("ex7", 0.5, -0.5, 1 + 1j),
    ]

    @pytest.mark.parametrize("name,x,y,k", CASES)
    def test_agreement(self, name, x, y, k):
        spec = builtin(name)
        oracle = oracle_logG(x, y, k, spec, FAST)
        exact = exact_logG(name, x, y, k, im_ref=oracle.log_g.imag)
        assert abs(oracle.log_g - exact) < 1e-7


class TestDomains:
    def test_x_below_y_rejected(self):
        with pytest.raises(UnsupportedDomainError):
            exact_green("ex1", 0.0, 1.0, 2.0)

    def test_unknown_example_rejected(self):
        with pytest.raises(UnsupportedDomainError):
            exact_green("ex8", 1.0, -1.0, 2.0)
        with pytest.raises(UnsupportedDomainError):
            exact_green("nope", 1.0, 0.0, 2.0)

    def test_zero_and_lower_half_wavenumbers_rejected(self):
        with pytest.raises(EvaluationDomainError):
            exact_green("ex1", 1.0, 0.0, 0.0)
        with pytest.raises(EvaluationDomainError):
            exact_green("ex1", 1.0, 0.0, 1.0 - 0.5j)

    def test_branch_points_rejected(self):
        with pytest.raises(EvaluationDomainError):
            exact_green("ex1", 1.0, 0.0, 1.0)
        with pytest.raises(EvaluationDomainError):
            exact_green("ex6", 0.5, -0.5, 0.5)

    def test_bessel_budget(self):
        for name in ("ex3", "ex6"):
            with pytest.raises(UnsupportedDomainError):
                exact_green(name, 0.5, -0.5, BESSEL_K_BUDGET + 10.0)

    def test_sinh_domain_for_hyperbolic_example(self):
        with pytest.raises(UnsupportedDomainError):
            exact_green("ex4", 1.5, 0.0, 2.0)

    def test_step_examples_need_origin_between(self):
        with pytest.raises(UnsupportedDomainError):
            exact_green("ex5", 2.0, 1.0, 2.0)
        with pytest.raises(UnsupportedDomainError):
            exact_green("ex7", 2.0, 1.0, 2 + 1j)


class TestAvailability:
    def test_matrix(self):
        assert closed_form_available("ex1", 1.0, 0.0, 2.0)
        assert closed_form_available("ex2", 1.0, 0.0, K45)
        assert not closed_form_available(None, 1.0, 0.0, 2.0)
        assert not closed_form_available("ex8", 1.0, -1.0, 2.0)
        assert not closed_form_available("ex4", 1.5, 0.0, 2.0)
        assert not closed_form_available("ex3", 0.5, -0.5, 60.0)
        assert not closed_form_available("ex5", 2.0, 1.0, 2.0)
        assert closed_form_available("ex6", 0.9, 0.4, 10.0)

    def test_ids(self):
        assert CLOSED_FORM_IDS == ("ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "ex7")


class TestSpecialEval:
    def test_gamma_golden(self):
        assert abs(special_eval(SpecialKind.GAMMA, [0.5]) - math.sqrt(math.pi)) < 1e-14
        assert abs(special_eval("gamma", [5.0]) - 24.0) < 1e-12

    def test_kummer_golden(self):
        assert special_eval("kummerM", [0.7, 1.3, 0.0]) == 1.0
        # M(a, a, z) = e^z
        got = special_eval("kummerM", [1.5, 1.5, 0.3 + 0.2j])
        assert abs(got - cmath.exp(0.3 + 0.2j)) < 1e-12

    def test_bessel_golden(self):
        got = special_eval("besselJ", [0.5, 1.0])
        assert abs(got - math.sqrt(2 / math.pi) * math.sin(1.0)) < 1e-13

    def test_gauss_golden(self):
        assert special_eval("gauss2F1", [0.3, 0.7, 1.1, 0.0]) == 1.0
        # 2F1(1, 1; 2; z) = -log(1-z)/z
        got = special_eval("gauss2F1", [1.0, 1.0, 2.0, 0.5])
        assert abs(got - (-cmath.log(0.5) / 0.5)) < 1e-12

    def test_gamma_poles(self):
        for bad in (0.0, -1.0, -5.0):
            with pytest.raises(EvaluationDomainError):
                special_eval("gamma", [bad])

    def test_kummer_bad_denominator_parameter(self):
        with pytest.raises(EvaluationDomainError):
            special_eval("kummerM", [0.5, -2.0, 1.0])

    def test_gauss_outside_disc(self):
        with pytest.raises(EvaluationDomainError):
            special_eval("gauss2F1", [0.3, 0.7, 1.1, 1.5])

    def test_unknown_kind_and_arity(self):
        with pytest.raises(EvaluationDomainError):
            special_eval("airy", [1.0])
        with pytest.raises(EvaluationDomainError):
            special_eval("gamma", [1.0, 2.0])


class TestTimeKernel:
    def test_constant_drift_kernel(self):
        x, y, t = 0.7, -0.2, 0.3
        expected = (
            math.exp(-(x - y))
            / math.sqrt(4 * math.pi * t)
            * math.exp(-((x - y) ** 2) / (4 * t))
            * math.exp(-t)
        )
        assert abs(exact_GF_time("ex1", x, y, t) - expected) < 1e-14

    def test_linear_drift_kernel(self):
        x, y, t = 1.0, 0.0, 0.25
        denom = -math.expm1(-4 * t)
        expected = math.exp(-((x - y * math.exp(-2 * t)) ** 2) / denom) / math.sqrt(
            math.pi * denom
        )
        assert abs(exact_GF_time("ex2", x, y, t) - expected) < 1e-14

    def test_linear_drift_equilibrium(self):
        # t -> infinity limit is the stationary density pi^(-1/2) exp(-x^2)
        x = 0.6
        got = exact_GF_time("ex2", x, 0.4, 25.0)
        assert abs(got - math.exp(-x * x) / math.sqrt(math.pi)) < 1e-12

    def test_preconditions(self):
        with pytest.raises(EvaluationDomainError):
            exact_GF_time("ex1", 1.0, 0.0, 0.0)
        with pytest.raises(EvaluationDomainError):
            exact_GF_time("ex1", 1.0, 0.0, -0.1)
        with pytest.raises(UnsupportedDomainError):
            exact_GF_time("ex3", 1.0, 0.0, 0.1)
