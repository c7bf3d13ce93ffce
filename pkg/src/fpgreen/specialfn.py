"""Special-function evaluation with controlled precision.

Thin wrappers around mpmath that fix the calling conventions used by the
closed-form Green functions: complex-valued gamma, Kummer confluent
hypergeometric M, Gauss hypergeometric 2F1 inside the unit disc, and Bessel J
of complex order.  All functions accept Python complex (or real) arguments
and return Python complex values.  Precision is set per call via ``dps``
(decimal digits); the default is enough for 1e-12 relative accuracy in the
parameter ranges the library targets.
"""

from __future__ import annotations

from enum import Enum

import mpmath

from .errors import ConvergenceError, EvaluationDomainError

__all__ = [
    "SpecialKind",
    "BASE_DPS",
    "gamma",
    "kummerM",
    "gauss2F1",
    "besselJ",
    "special_eval",
    "gamma_mp",
    "kummerM_mp",
    "gauss2F1_mp",
    "besselJ_mp",
]

BASE_DPS = 30

try:  # pragma: no cover - import location is an mpmath internal detail
    from mpmath.libmp.libhyper import NoConvergence as _MPNoConvergence
except ImportError:  # pragma: no cover
    class _MPNoConvergence(Exception):
        pass


class SpecialKind(str, Enum):
    GAMMA = "gamma"
    KUMMER_M = "kummerM"
    GAUSS_2F1 = "gauss2F1"
    BESSEL_J = "besselJ"


def _mpc(value: complex) -> mpmath.mpc:
    value = complex(value)
    return mpmath.mpc(value.real, value.imag)


def _is_nonpositive_integer(z: complex) -> bool:
    z = complex(z)
    if z.imag != 0.0:
        return False
    return z.real <= 0.0 and z.real == int(z.real)


def gamma_mp(z):
    """Gamma function at the ambient mpmath precision (mp-valued result).

    Use inside a ``workdps`` block when intermediate values may exceed the
    float exponent range; the public ``gamma`` wrapper returns Python complex.
    """
    if _is_nonpositive_integer(complex(z)):
        raise EvaluationDomainError(
            f"gamma pole at non-positive integer argument {complex(z)}"
        )
    try:
        return mpmath.gamma(z)
    except ValueError as exc:
        raise EvaluationDomainError(f"gamma evaluation failed: {exc}") from exc


def kummerM_mp(a, b, z):
    """Kummer M(a, b; z) at the ambient mpmath precision (mp-valued result)."""
    if _is_nonpositive_integer(complex(b)):
        raise EvaluationDomainError(
            f"kummerM undefined for non-positive integer second parameter {complex(b)}"
        )
    try:
        return mpmath.hyp1f1(a, b, z)
    except _MPNoConvergence as exc:
        raise ConvergenceError(f"kummerM series did not converge: {exc}") from exc


def gauss2F1_mp(a, b, c, z):
    """Gauss 2F1(a, b; c; z) for |z| < 1 at the ambient precision."""
    if _is_nonpositive_integer(complex(c)):
        raise EvaluationDomainError(
            f"gauss2F1 undefined for non-positive integer third parameter {complex(c)}"
        )
    if abs(mpmath.mpmathify(z)) >= 1:
        raise EvaluationDomainError(
            f"gauss2F1 requires |z| < 1, got |z| = {abs(complex(z)):.6g}"
        )
    try:
        return mpmath.hyp2f1(a, b, c, z)
    except _MPNoConvergence as exc:
        raise ConvergenceError(f"gauss2F1 series did not converge: {exc}") from exc


def besselJ_mp(nu, z):
    """Bessel J_nu(z) at the ambient mpmath precision (mp-valued result)."""
    try:
        return mpmath.besselj(nu, z)
    except _MPNoConvergence as exc:
        raise ConvergenceError(f"besselJ evaluation did not converge: {exc}") from exc


def gamma(z: complex, dps: int | None = None) -> complex:
    """Gamma function of a complex argument."""
    with mpmath.workdps(dps or BASE_DPS):
        return complex(gamma_mp(_mpc(z)))


def kummerM(a: complex, b: complex, z: complex, dps: int | None = None) -> complex:
    """Confluent hypergeometric function M(a, b; z) (Kummer's function)."""
    with mpmath.workdps(dps or BASE_DPS):
        return complex(kummerM_mp(_mpc(a), _mpc(b), _mpc(z)))


def gauss2F1(
    a: complex, b: complex, c: complex, z: complex, dps: int | None = None
) -> complex:
    """Gauss hypergeometric function 2F1(a, b; c; z) for |z| < 1."""
    with mpmath.workdps(dps or BASE_DPS):
        return complex(gauss2F1_mp(_mpc(a), _mpc(b), _mpc(c), _mpc(z)))


def besselJ(nu: complex, z: complex, dps: int | None = None) -> complex:
    """Bessel function J_nu(z) of complex order and argument."""
    with mpmath.workdps(dps or BASE_DPS):
        return complex(besselJ_mp(_mpc(nu), _mpc(z)))


_DISPATCH = {
    SpecialKind.GAMMA: (gamma, 1),
    SpecialKind.KUMMER_M: (kummerM, 3),
    SpecialKind.GAUSS_2F1: (gauss2F1, 4),
    SpecialKind.BESSEL_J: (besselJ, 2),
}


def special_eval(kind: str | SpecialKind, params, dps: int | None = None) -> complex:
    """Evaluate a named special function on a parameter tuple.

    ``kind`` is one of ``gamma`` (params ``(z,)``), ``kummerM`` (``(a, b, z)``),
    ``gauss2F1`` (``(a, b, c, z)``) or ``besselJ`` (``(nu, z)``).
    """
    try:
        kind = SpecialKind(kind)
    except ValueError:
        valid = ", ".join(k.value for k in SpecialKind)
        raise EvaluationDomainError(
            f"unknown special function kind {kind!r}; expected one of {valid}"
        ) from None
    fn, arity = _DISPATCH[kind]
    params = tuple(params)
    if len(params) != arity:
        raise EvaluationDomainError(
            f"{kind.value} expects {arity} parameter(s), got {len(params)}"
        )
    return fn(*params, dps=dps)
