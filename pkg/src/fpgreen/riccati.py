"""Independent numerical oracle for the exact Green function.

Two routes, both reduced to complex ODE sweeps:

* finite_scattering integrates the transmission/reflection system across a
  finite interval: tau' = ik tau - f R_r tau, R_r' = 2ik R_r + f (1 - R_r^2),
  R_l' = -f tau^2, from (tau, R_r, R_l) = (1, 0, 0).
* semi_infinite_S integrates the Riccati equation dS_r/dx = 2ik S_r(1-S_r)
  + f(x)(1 - 2 S_r) upward from a truncation point deep in the left tail
  (and the mirrored equation for S_l downward from the right tail), doubling
  the truncation length until the endpoint values settle.

oracle_logG assembles log G = ik(x-y) - ik Int_y^x S dz
- (1/2) log(1-S(x)) - (1/2) log(1-S(y)) with S = S_r + S_l, accumulating the
z-integral alongside the sweeps.

Initial values deep in a tail: the attracting stationary root of the
Riccati equation at the local drift value, [(1-2c) - sqrt(1+4c^2)]/2 with
c = f/(2ik) (mirrored: c = -f/(2ik)) and the square root aligned with
1-2c.  This reduces to the root that vanishes with the drift for decaying
or finite tails, and to the quasi-static attracting branch (near 1/2) for
growing drifts.  Where the drift grows without bound the truncation point
is clamped so |f| stays within a stiffness budget; beyond that point the
solution is exponentially slaved to the stationary root, so the clamp
costs no accuracy.  Real-axis wavenumbers lack tail contraction, which is
why they require finite drift limits.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import expr as ex
from .errors import ConvergenceError, EvaluationDomainError
from .potential import PotentialSpec, segments_between

S_BRANCH_TOL = 1e-12
R_BLOWUP = 1e8
F_TAIL_STIFFNESS_CAP = 1000.0


@dataclass(frozen=True)
class OracleConfig:
    l_start: float = 20.0
    l_max: float = 320.0
    tol: float = 1e-9
    scatter_tol: float = 1e-10
    rtol: float = 1e-10
    atol: float = 1e-12
    method: str = "DOP853"


DEFAULT_CONFIG = OracleConfig()


@dataclass(frozen=True)
class ScatteringTriple:
    """Transmission and two-sided reflection data for a finite interval."""

    tau: complex
    r_r: complex
    r_l: complex
    interval: tuple[float, float]


@dataclass(frozen=True)
class SemiInfiniteS:
    """S_r and S_l at one point with the truncation metadata."""

    s_r: complex
    s_l: complex
    truncation_l: float
    converged: bool


@dataclass(frozen=True)
class GreenEval:
    """Oracle Green-function data at a pair (x, y); S values are at x."""

    s_r: complex
    s_l: complex
    s: complex
    g: complex
    log_g: complex
    truncation_l: float
    converged: bool


def _drift_fn(spec: PotentialSpec, lo: float, hi: float):
    """Drift evaluator valid on the open segment (lo, hi) of one piece."""
    if math.isinf(lo):
        probe = hi - 1.0
    elif math.isinf(hi):
        probe = lo + 1.0
    else:
        probe = 0.5 * (lo + hi)
    idx = spec.piece_index(probe)
    pieces = spec._f_pieces
    if pieces is not None:
        ast = pieces[idx]
        return lambda z: ex.evaluate(ast, z)
    return lambda z: spec.drift(z)


def _check_wavenumber(spec: PotentialSpec, k: complex) -> complex:
    k = complex(k)
    if k == 0:
        raise EvaluationDomainError("the oracle is undefined at k = 0")
    if k.imag < 0:
        raise EvaluationDomainError(f"the oracle needs Im k >= 0, got {k}")
    if k.imag == 0:
        left, right = spec.tails
        if not (left.is_finite and right.is_finite):
            raise EvaluationDomainError(
                "real-axis evaluation needs finite drift limits on both sides"
            )
    return k


def _stationary_root(k: complex, f_value: float, mirror: bool) -> complex:
    """Attracting root of the (possibly mirrored) stationary Riccati equation.

    With c = f/(sign 2ik) the roots are [(1-2c) +/- sqrt(1+4c^2)]/2; the
    branch aligned against 1-2c vanishes as f -> 0 and is the one the sweep
    contracts onto deep in a tail, including for large |f|.
    """
    sign = -1.0 if mirror else 1.0
    c = f_value / (sign * 2j * k)
    base = 1.0 - 2.0 * c
    root = cmath.sqrt(1.0 + 4.0 * c * c)
    if base.real * root.real + base.imag * root.imag < 0.0:
        root = -root
    return 0.5 * (base - root)


def _clamped_length(
    spec: PotentialSpec, start_base: float, length: float, mirror: bool
) -> float:
    """Shrink the tail length until |f| at its start is within the stiffness
    budget; the solution out there is slaved to the stationary root, so the
    clamp does not affect the swept values."""
    direction = 1.0 if mirror else -1.0

    def drift_mag(l: float) -> float:
        return abs(spec.drift(start_base + direction * l))

    if drift_mag(length) <= F_TAIL_STIFFNESS_CAP:
        return length
    lo, hi = 1e-6, length
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if drift_mag(mid) <= F_TAIL_STIFFNESS_CAP:
            lo = mid
        else:
            hi = mid
    return lo


def _sweep(
    spec: PotentialSpec,
    k: complex,
    z_from: float,
    z_to: float,
    s0: complex,
    cfg: OracleConfig,
    mirror: bool,
    accumulate: bool,
) -> tuple[complex, complex]:
    """Integrate the Riccati equation from z_from to z_to (either direction).

    Returns (S at z_to, oriented integral of S dz); the integral is only
    accumulated when requested.
    """
    sign = -1.0 if mirror else 1.0
    state = np.array([s0, 0j], dtype=complex)
    for lo, hi in segments_between(spec, z_from, z_to):
        f = _drift_fn(spec, min(lo, hi), max(lo, hi))

        def rhs(z, u, f=f):
            s = u[0]
            return [sign * 2j * k * s * (1 - s) + f(z) * (1 - 2 * s), s]

        sol = solve_ivp(
            rhs,
            (lo, hi),
            state,
            method=cfg.method,
            rtol=cfg.rtol,
            atol=cfg.atol,
        )
        if not sol.success:
            raise ConvergenceError(
                f"Riccati sweep failed near z = {sol.t[-1]:.6g}: {sol.message}"
            )
        state = sol.y[:, -1]
        if abs(1 - state[0]) < S_BRANCH_TOL:
            raise ConvergenceError(f"S reached 1 near z = {hi:.6g}")
    integral = state[1] if accumulate else 0j
    return complex(state[0]), complex(integral)


def _anchor(spec: PotentialSpec, point: float, mirror: bool) -> float:
    """Start tails beyond both the requested point and every breakpoint."""
    bps = spec.breakpoints
    if mirror:
        base = max((point, *bps)) if bps else point
    else:
        base = min((point, *bps)) if bps else point
    return base


@dataclass(frozen=True)
class _SweepResult:
    at_far: complex  # S at the far endpoint of the refinement interval
    at_near: complex  # S at the entry endpoint (tail side)
    integral: complex  # oriented integral of S over the refinement interval
    truncation_l: float
    converged: bool


def _converged_sweep(
    spec: PotentialSpec,
    k: complex,
    near: float,
    far: float,
    cfg: OracleConfig,
    mirror: bool,
) -> _SweepResult:
    """Tail sweep into `near`, then refinement sweep `near -> far`, doubling
    the tail truncation until both endpoint values settle."""
    start_base = _anchor(spec, near, mirror)
    previous: tuple[complex, complex] | None = None
    length = cfg.l_start
    while True:
        effective = _clamped_length(spec, start_base, length, mirror)
        z0 = start_base + effective if mirror else start_base - effective
        init = _stationary_root(k, spec.drift(z0), mirror)
        s_near, _ = _sweep(spec, k, z0, near, init, cfg, mirror, accumulate=False)
        s_far, integral = _sweep(spec, k, near, far, s_near, cfg, mirror, accumulate=True)
        if previous is not None:
            delta = max(abs(s_near - previous[0]), abs(s_far - previous[1]))
            if delta < cfg.tol:
                return _SweepResult(s_far, s_near, integral, effective, True)
        previous = (s_near, s_far)
        if length >= cfg.l_max:
            raise ConvergenceError(
                f"semi-infinite sweep did not settle by L = {length:g} "
                f"(last endpoint values {previous})"
            )
        length *= 2.0


def semi_infinite_S(
    x: float, k: complex, spec: PotentialSpec, cfg: OracleConfig = DEFAULT_CONFIG
) -> SemiInfiniteS:
    """S_r(x) and S_l(x) from semi-infinite Riccati sweeps."""
    k = _check_wavenumber(spec, k)
    right = _converged_sweep(spec, k, x, x, cfg, mirror=False)
    left = _converged_sweep(spec, k, x, x, cfg, mirror=True)
    return SemiInfiniteS(
        s_r=right.at_far,
        s_l=left.at_far,
        truncation_l=max(right.truncation_l, left.truncation_l),
        converged=right.converged and left.converged,
    )


def _sweep_wavenumber(spec: PotentialSpec, k: complex) -> complex:
    """Drift-form sweep wavenumber p with p^2 = k^2 - E0 and Im p >= 0."""
    if not spec.e0:
        return k
    p = cmath.sqrt(k * k - spec.e0)
    if p.imag < 0 or (p.imag == 0 and p.real < 0):
        p = -p
    if p == 0:
        raise EvaluationDomainError(
            f"k^2 coincides with the energy offset E0 = {spec.e0}"
        )
    return p


def oracle_logG(
    x: float,
    y: float,
    k: complex,
    spec: PotentialSpec,
    cfg: OracleConfig = DEFAULT_CONFIG,
) -> GreenEval:
    """Oracle log G(x, y; k) via Riccati sweeps; requires x > y.

    When the spec carries a nonzero energy offset E0 (potential given in
    Schrodinger form), the drift equations hold at the shifted wavenumber
    p = sqrt(k^2 - E0); the sweeps run at p, the sweep fields of the result
    are reported at p, and log G is expressed back in terms of k itself so
    that it matches the k-expansion of the potential.
    """
    if not x > y:
        raise EvaluationDomainError(f"the oracle needs x > y, got x={x}, y={y}")
    k = _check_wavenumber(spec, k)
    p = _sweep_wavenumber(spec, k)
    sweep_r = _converged_sweep(spec, p, y, x, cfg, mirror=False)
    sweep_l = _converged_sweep(spec, p, x, y, cfg, mirror=True)
    s_at_x = sweep_r.at_far + sweep_l.at_near
    s_at_y = sweep_r.at_near + sweep_l.at_far
    for point, value in ((x, s_at_x), (y, s_at_y)):
        if abs(1 - value) < S_BRANCH_TOL:
            raise ConvergenceError(f"S = 1 at z = {point}; log(1-S) is singular")
    # sweep_l.integral is oriented x -> y, so flip its sign
    s_integral = sweep_r.integral - sweep_l.integral
    log_g = (
        1j * p * (x - y)
        - 1j * p * s_integral
        - 0.5 * (cmath.log(1 - s_at_x) + cmath.log(1 - s_at_y))
    )
    if p != k:
        # 1/(2ip) normalization restated in k; k/p stays off the branch cut
        log_g += cmath.log(k / p)
    return GreenEval(
        s_r=sweep_r.at_far,
        s_l=sweep_l.at_near,
        s=s_at_x,
        g=cmath.exp(log_g),
        log_g=log_g,
        truncation_l=max(sweep_r.truncation_l, sweep_l.truncation_l),
        converged=sweep_r.converged and sweep_l.converged,
    )


def finite_scattering(
    x1: float,
    x2: float,
    k: complex,
    spec: PotentialSpec,
    cfg: OracleConfig = DEFAULT_CONFIG,
) -> ScatteringTriple:
    """Transmission and reflection coefficients of the interval [x1, x2]."""
    if x1 > x2:
        raise EvaluationDomainError(f"finite_scattering needs x1 <= x2, got {x1} > {x2}")
    k = complex(k)
    if k == 0:
        raise EvaluationDomainError("finite_scattering is undefined at k = 0")
    if x1 == x2:
        return ScatteringTriple(tau=1.0 + 0j, r_r=0j, r_l=0j, interval=(x1, x2))
    state = np.array([1.0 + 0j, 0j, 0j], dtype=complex)
    for lo, hi in segments_between(spec, x1, x2):
        f = _drift_fn(spec, lo, hi)

        def rhs(z, u, f=f):
            tau, r_r, _ = u
            fz = f(z)
            return [
                1j * k * tau - fz * r_r * tau,
                2j * k * r_r + fz * (1 - r_r * r_r),
                -fz * tau * tau,
            ]

        sol = solve_ivp(
            rhs,
            (lo, hi),
            state,
            method=cfg.method,
            rtol=cfg.scatter_tol,
            atol=cfg.atol,
        )
        if not sol.success:
            raise ConvergenceError(
                f"scattering integration failed near z = {sol.t[-1]:.6g}: {sol.message}"
            )
        state = sol.y[:, -1]
        if max(abs(state[1]), abs(state[2])) > R_BLOWUP:
            raise ConvergenceError(
                f"reflection coefficient blew up near z = {hi:.6g} (resonance)"
            )
    return ScatteringTriple(
        tau=complex(state[0]),
        r_r=complex(state[1]),
        r_l=complex(state[2]),
        interval=(x1, x2),
    )
