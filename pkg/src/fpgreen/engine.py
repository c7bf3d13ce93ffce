"""Numeric evaluation of expansion coefficients, partial sums, and the
short-time form.

The engine turns the exact symbolic machinery (gen_s, gen_alpha, gen_b_g)
into numbers for a concrete potential:

* odd coefficients integrate -s_{n+1} between the endpoints, picking up
  the delta-function content that the drift jets spawn at jump points;
* even coefficients are the pointwise boundary terms alpha_n(x) + alpha_n(y);
* jump corrections extend the series beyond the plain validity cap, either
  through the generic order-(2M+2) constant or, for an order-0 jump between
  constant drift pieces, through an exact correction series valid at every
  order.

All delta bookkeeping is canonicalised: a product g(z) * delta^(i)(z - z0)
is rewritten as a combination of constant-coefficient delta derivatives at
z0 by differentiating the cofactor symbolically and evaluating one-sided.
If the two one-sided values disagree the product is genuinely ambiguous
and a DistributionProductError is raised.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import mpmath
from scipy.integrate import quad

from .coeffs import gen_alpha, gen_s
from .diffpoly import Basis, DiffPoly, dpoly_dx
from .errors import (
    ConvergenceError,
    DistributionProductError,
    EvaluationDomainError,
    OrderLimitError,
    PotentialError,
)
from .expr import Const
from .potential import JumpRecord, Mode, PotentialSpec, segments_between
from .seriescomb import gen_b, gen_b_g, gen_g
from .validity import (
    Regime,
    UNBOUNDED,
    ValidityReport,
    classify_validity,
    envelope_caps,
    regime_for_point,
)

QUAD_EPSABS = 1e-10
QUAD_EPSREL = 1e-10
DIAG_TOL_SCALE = 1e-6  # below 1e-6 * max(1, |x|) separation use the diagonal form
NEAR_DIAG_SEP = 0.05  # below this separation combine coefficients in mpmath
NEAR_DIAG_DPS = 40
COFACTOR_REL_TOL = 1e-9


# ---------------------------------------------------------------------------
# distributional values of the s_n


@dataclass(frozen=True)
class SingularTerm:
    """One canonical term coefficient * delta^(order)(z - point)."""

    point: float
    order: int
    coefficient: float


@dataclass(frozen=True)
class DistValue:
    """A piecewise-smooth function plus delta-derivative terms at jumps."""

    smooth: Callable[[float], float]
    singular: tuple[SingularTerm, ...]

    def integral_over(self, y: float, x: float) -> float:
        """Integral of the singular part over (y, x); only plain deltas count."""
        total = 0.0
        for term in self.singular:
            if y < term.point < x and term.order == 0:
                total += term.coefficient
        return total


def _first_singular_jet(spec: PotentialSpec, rec: JumpRecord) -> int:
    """Lowest jet order of the expansion basis that is discontinuous."""
    if spec.expansion_basis is Basis.VS_BASIS:
        return rec.order - 1
    return rec.order


def _jump_magnitudes(spec: PotentialSpec, rec: JumpRecord, up_to: int) -> dict[int, float]:
    m_b = _first_singular_jet(spec, rec)
    if up_to < m_b:
        return {}
    right = spec.expansion_jet(rec.location, up_to, side=1)
    left = spec.expansion_jet(rec.location, up_to, side=-1)
    return {m: right[m] - left[m] for m in range(m_b, up_to + 1)}


def _cofactor_at(spec: PotentialSpec, poly: DiffPoly, z0: float):
    """Evaluate a cofactor polynomial one-sided at z0; insist both sides agree."""
    order = poly.max_order()
    right = poly.evaluate(spec.expansion_jet(z0, order, side=1))
    left = poly.evaluate(spec.expansion_jet(z0, order, side=-1))
    scale = max(abs(left), abs(right), 1.0)
    if abs(right - left) > COFACTOR_REL_TOL * scale:
        raise DistributionProductError(
            f"product of a delta at z={z0} with a cofactor that is discontinuous "
            f"there (left {left!r}, right {right!r}) has no canonical value"
        )
    return 0.5 * (left + right)


def _singular_terms_at_jump(
    spec: PotentialSpec, poly: DiffPoly, rec: JumpRecord
) -> dict[int, float]:
    """Canonical delta-derivative coefficients of poly at one jump point.

    Each jet factor of order j >= m_b + 1 carries delta derivatives
    sum_{m=m_b}^{j-1} J_m delta^(j-1-m); a monomial with two such factors
    is an ill-defined product of distributions.
    """
    z0 = rec.location
    m_b = _first_singular_jet(spec, rec)
    jumps = _jump_magnitudes(spec, rec, poly.max_order() - 1)
    out: dict[int, float] = {}
    for mon, coeff in poly.terms.items():
        bearing = [j for j in mon if j >= m_b + 1]
        if not bearing:
            continue
        if len(bearing) >= 2:
            raise DistributionProductError(
                f"monomial {mon} multiplies two singular factors at z={z0}; "
                "the product of distributions is undefined"
            )
        j = bearing[0]
        rest = list(mon)
        rest.remove(j)
        cofactor = DiffPoly({tuple(rest): coeff}, basis=poly.basis)
        for m in range(m_b, j):
            jump_m = jumps.get(m, 0.0)
            if jump_m == 0.0:
                continue
            i0 = j - 1 - m
            g = cofactor
            for r in range(i0 + 1):
                value = jump_m * (-1) ** r * math.comb(i0, r) * _cofactor_at(spec, g, z0)
                if value:
                    out[i0 - r] = out.get(i0 - r, 0.0) + value
                if r < i0:
                    g = dpoly_dx(g)
    return out


def eval_s(n: int, z: float, spec: PotentialSpec, force: bool = False):
    """Value of s_n at z together with its full distributional description.

    Returns ``(smooth_value, DistValue)``.  z must not sit at a jump point.
    """
    for rec in spec.jumps:
        if z == rec.location:
            raise EvaluationDomainError(
                f"s_{n} has a singular part at the jump point z={z}"
            )
    basis = spec.expansion_basis
    poly = gen_s(n, basis, force=force)
    order = poly.max_order()

    def smooth(point: float) -> float:
        return poly.evaluate(spec.expansion_jet(point, order))

    singular: list[SingularTerm] = []
    for rec in spec.jumps:
        for i, c in sorted(_singular_terms_at_jump(spec, poly, rec).items()):
            singular.append(SingularTerm(rec.location, i, c))
    return smooth(z), DistValue(smooth, tuple(singular))


# ---------------------------------------------------------------------------
# coefficients


def _quad_segment(integrand, lo: float, hi: float, epsabs: float, epsrel: float) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        value, abserr = quad(integrand, lo, hi, epsabs=epsabs, epsrel=epsrel, limit=200)
    if abserr > 10.0 * max(epsabs, epsrel * abs(value)):
        raise ConvergenceError(
            f"quadrature on [{lo}, {hi}] reported error {abserr:.3e} "
            f"for value {value:.6e}"
        )
    return value


def _smooth_odd_integral(
    n: int,
    x: float,
    y: float,
    spec: PotentialSpec,
    force: bool,
    epsabs: float,
    epsrel: float,
) -> float:
    poly = gen_s(n + 1, spec.expansion_basis, force=force)
    order = poly.max_order()

    def integrand(z: float) -> float:
        return poly.evaluate(spec.expansion_jet(z, order))

    total = 0.0
    for lo, hi in segments_between(spec, y, x):
        total += _quad_segment(integrand, lo, hi, epsabs, epsrel)
    return -total


def _delta_contribution(n: int, x: float, y: float, spec: PotentialSpec, rec: JumpRecord,
                        force: bool) -> float:
    """-integral over (y, x) of the delta content of s_{n+1} at one jump."""
    poly = gen_s(n + 1, spec.expansion_basis, force=force)
    terms = _singular_terms_at_jump(spec, poly, rec)
    return -terms.get(0, 0.0)


def _inside_jumps(spec: PotentialSpec, y: float, x: float) -> list[JumpRecord]:
    return [rec for rec in spec.jumps if y < rec.location < x]


def route1_capable(spec: PotentialSpec, rec: JumpRecord) -> bool:
    """True when the exact all-order correction series applies: an order-0
    drift jump whose two adjacent drift pieces are constants."""
    if rec.order != 0 or spec._f_pieces is None:
        return False
    left = spec._f_pieces[spec.piece_index(rec.location, side=-1)]
    right = spec._f_pieces[spec.piece_index(rec.location, side=1)]
    return isinstance(left, Const) and isinstance(right, Const)


def _adjacent_constants(spec: PotentialSpec, rec: JumpRecord) -> tuple[Fraction, Fraction]:
    left = spec._f_pieces[spec.piece_index(rec.location, side=-1)]
    right = spec._f_pieces[spec.piece_index(rec.location, side=1)]
    return left.value, right.value


def coeff_a(
    n: int,
    x: float,
    y: float,
    spec: PotentialSpec,
    force: bool = False,
    epsabs: float = QUAD_EPSABS,
    epsrel: float = QUAD_EPSREL,
) -> float:
    """Plain expansion coefficient a_n(x, y), delta content included.

    Requires x > y with neither endpoint at a jump point.  Odd orders
    integrate -s_{n+1}; even orders are alpha_n(x) + alpha_n(y).
    """
    if not x > y:
        raise EvaluationDomainError(f"coefficients need x > y, got x={x}, y={y}")
    for rec in spec.jumps:
        if x == rec.location or y == rec.location:
            raise EvaluationDomainError(
                f"endpoint at the jump point z={rec.location} is not allowed"
            )
    if n < 1:
        raise EvaluationDomainError(f"coefficient order must be >= 1, got {n}")
    if not force:
        cap = classify_validity(spec, x, y)[Regime.SECTOR].max_order
        if cap is not UNBOUNDED and n > cap + 1:
            raise OrderLimitError(
                f"a_{n} lies beyond the usable orders (cap {cap}, plus the "
                f"single corrected slot {cap + 1}); pass force=True to try"
            )
    basis = spec.expansion_basis
    if n % 2 == 0:
        poly = gen_alpha(n, basis, force=force)
        order = poly.max_order()
        return poly.evaluate(spec.expansion_jet(x, order)) + poly.evaluate(
            spec.expansion_jet(y, order)
        )
    value = _smooth_odd_integral(n, x, y, spec, force, epsabs, epsrel)
    for rec in _inside_jumps(spec, y, x):
        value += _delta_contribution(n, x, y, spec, rec, force)
    return value


# ---------------------------------------------------------------------------
# series assembly


@dataclass(frozen=True)
class ExpansionSeries:
    """Coefficients a_1..a_order for one (x, y) pair.

    ``a`` holds the plain coefficients (smooth plus delta content).
    ``corrected_orders`` holds jump-correction increments as (order, value)
    pairs, already summed over jumps; they apply on top of ``a`` whenever the
    series is used in corrected form.
    """

    x: float
    y: float
    order: int
    a: tuple[float, ...]
    corrected_orders: tuple[tuple[int, float], ...]
    basis: Basis
    regime: Regime
    validity: ValidityReport
    corrected: bool
    forced: bool

    def coefficient(self, n: int, corrected: bool | None = None) -> float:
        if not 1 <= n <= self.order:
            raise IndexError(f"order {n} outside 1..{self.order}")
        use = self.corrected if corrected is None else corrected
        value = self.a[n - 1]
        if use:
            value += sum(v for m, v in self.corrected_orders if m == n)
        return value


def _corrected_cap(spec: PotentialSpec, x: float, y: float, regime: Regime):
    """Maximum usable order when jump corrections are applied."""
    envelope = envelope_caps(spec, x, y)[regime]
    caps = [envelope]
    for rec in _inside_jumps(spec, y, x):
        caps.append(UNBOUNDED if route1_capable(spec, rec) else 2 * rec.order + 2)
    finite = [c for c in caps if c is not UNBOUNDED]
    return min(finite) if finite else UNBOUNDED


def expansion_series(
    x: float,
    y: float,
    order: int,
    spec: PotentialSpec,
    corrected: bool = True,
    force: bool = False,
    regime: Regime = Regime.SECTOR,
    epsabs: float = QUAD_EPSABS,
    epsrel: float = QUAD_EPSREL,
) -> ExpansionSeries:
    """Assemble a_1..a_order plus jump corrections for one geometry."""
    if order < 0:
        raise EvaluationDomainError(f"order must be >= 0, got {order}")
    reports = classify_validity(spec, x, y)
    report = reports[regime]
    if corrected:
        cap = _corrected_cap(spec, x, y, regime)
    else:
        cap = report.max_order
    capped = cap is not UNBOUNDED and order > cap
    if capped and not force:
        raise OrderLimitError(
            f"order {order} exceeds the {regime.value} validity cap {cap} "
            f"for x={x}, y={y}; pass force=True to evaluate anyway"
        )

    inside = _inside_jumps(spec, y, x)
    skip_gf = [rec for rec in inside if corrected and route1_capable(spec, rec)]

    values: list[float] = []
    for n in range(1, order + 1):
        if n % 2 == 0:
            values.append(coeff_a(n, x, y, spec, force=True, epsabs=epsabs, epsrel=epsrel))
            continue
        value = _smooth_odd_integral(n, x, y, spec, True, epsabs, epsrel)
        for rec in inside:
            if n <= 2 * rec.order + 1:
                value += _delta_contribution(n, x, y, spec, rec, True)
            elif rec in skip_gf:
                pass  # the exact correction series carries every higher order
            else:
                raise DistributionProductError(
                    f"a_{n} needs an undefined product of distributions at "
                    f"z={rec.location} (jump order {rec.order})"
                )
        values.append(value)

    corrections: dict[int, float] = {}
    if corrected:
        for rec in inside:
            if route1_capable(spec, rec):
                a_val, b_val = _adjacent_constants(spec, rec)
                for m, gf in enumerate(jump_correction_series(a_val, b_val, order)):
                    if m >= 2 and gf:
                        corrections[m] = corrections.get(m, 0.0) + float(gf)
            else:
                m = 2 * rec.order + 2
                if m <= order:
                    value = (-1) ** rec.order * rec.magnitude**2 / 2.0
                    corrections[m] = corrections.get(m, 0.0) + value

    return ExpansionSeries(
        x=x,
        y=y,
        order=order,
        a=tuple(values),
        corrected_orders=tuple(sorted(corrections.items())),
        basis=spec.expansion_basis,
        regime=regime,
        validity=report,
        corrected=corrected,
        forced=capped,
    )


# ---------------------------------------------------------------------------
# exact correction series for an order-0 jump between constant drifts


def _ts_mul(p: Sequence[Fraction], q: Sequence[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, pi in enumerate(p):
        if not pi:
            continue
        for j in range(min(len(q), order - i + 1)):
            if q[j]:
                out[i + j] += pi * q[j]
    return out


def _ts_div(num: Sequence[Fraction], den: Sequence[Fraction], order: int) -> list[Fraction]:
    if not den[0]:
        raise ZeroDivisionError("series division needs a nonzero constant term")
    out = [Fraction(0)] * (order + 1)
    for i in range(order + 1):
        acc = num[i] if i < len(num) else Fraction(0)
        for j in range(1, i + 1):
            acc -= out[i - j] * den[j]
        out[i] = acc / den[0]
    return out


def _ts_log1m(w: Sequence[Fraction], order: int) -> list[Fraction]:
    if w[0]:
        raise ValueError("log(1 - w) series needs w(0) = 0")
    out = [Fraction(0)] * (order + 1)
    power = list(w)
    for m in range(1, order + 1):
        if m > 1:
            power = _ts_mul(power, w, order)
        for i in range(order + 1):
            out[i] -= power[i] / m
    return out


def _ts_sqrt_one_plus(c: Fraction, order: int) -> list[Fraction]:
    """Series of sqrt(1 + 4 c^2 t^2) to the requested order."""
    out = [Fraction(0)] * (order + 1)
    term = Fraction(1)
    c2 = 4 * c * c
    for m in range(order // 2 + 1):
        if m:
            term *= Fraction(3 - 2 * m, 2 * m) * c2
        out[2 * m] = term
    return out


def jump_correction_series(a_value, b_value, order: int) -> list[Fraction]:
    """Correction series for an order-0 drift jump from value a to value b.

    Entry m is the exact rational increment to a_m; entries 0 and 1 vanish
    once the plain delta content of a_1 is accounted for (entry 1 equals
    that delta content and is reported for reference).
    """
    a_val = Fraction(a_value)
    b_val = Fraction(b_value)

    def roots(c: Fraction):
        h = _ts_sqrt_one_plus(c, order)
        small = [(Fraction(1) - hi) / 2 if i == 0 else -hi / 2 for i, hi in enumerate(h)]
        big = [(Fraction(1) + hi) / 2 if i == 0 else hi / 2 for i, hi in enumerate(h)]
        small[0] = (Fraction(1) - h[0]) / 2
        big[0] = (Fraction(1) + h[0]) / 2
        minus = [Fraction(0)] * (order + 1)
        minus[1] = c
        p_small = [si - mi for si, mi in zip(small, minus)]
        p_big = [bi - mi for bi, mi in zip(big, minus)]
        q_small = [si + mi for si, mi in zip(small, minus)]
        q_big = [bi + mi for bi, mi in zip(big, minus)]
        return p_small, p_big, q_small, q_big

    pa_small, pa_big, qa_small, qa_big = roots(a_val)
    pb_small, pb_big, qb_small, qb_big = roots(b_val)

    num_r = [x1 - x2 for x1, x2 in zip(pa_small, pb_small)]
    den_r = [x1 - x2 for x1, x2 in zip(pa_small, pb_big)]
    w_r = _ts_div(num_r, den_r, order)

    num_l = [x1 - x2 for x1, x2 in zip(qb_small, qa_small)]
    den_l = [x1 - x2 for x1, x2 in zip(qb_small, qa_big)]
    w_l = _ts_div(num_l, den_l, order)

    total = [
        (u + v) / 2 for u, v in zip(_ts_log1m(w_r, order), _ts_log1m(w_l, order))
    ]
    return total


# ---------------------------------------------------------------------------
# partial sums


@dataclass(frozen=True)
class LogGreenSeries:
    """Truncated log G expansion at one wavenumber."""

    x: float
    y: float
    k: complex
    order: int
    series: ExpansionSeries
    leading: complex
    terms: tuple[complex, ...]
    partial_sum: complex
    log_gs: complex
    gf_prefactor: float | None
    corrections_applied: bool
    validity_regime: Regime
    forced: bool

    def record(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "k_re": self.k.real,
            "k_im": self.k.imag,
            "N": self.order,
            "terms": [[t.real, t.imag] for t in self.terms],
            "partial_sum": [self.partial_sum.real, self.partial_sum.imag],
            "corrections_applied": self.corrections_applied,
            "validity_regime": self.validity_regime.value,
        }


def _series_totals(series: ExpansionSeries) -> list[float]:
    totals = list(series.a)
    if series.corrected:
        for m, value in series.corrected_orders:
            if 1 <= m <= series.order:
                totals[m - 1] += value
    return totals


def partial_sum_terms(series: ExpansionSeries, k: complex) -> tuple[complex, list[complex]]:
    """Leading phase and per-order terms a_n / (2ik)^n for one wavenumber."""
    k = complex(k)
    t = 1.0 / (2j * k)
    leading = 1j * k * (series.x - series.y)
    terms = []
    tn = 1.0 + 0j
    for total in _series_totals(series):
        tn *= t
        terms.append(total * tn)
    return leading, terms


def _check_wavenumber(k: complex) -> complex:
    k = complex(k)
    if k == 0:
        raise EvaluationDomainError("the expansion is undefined at k = 0")
    if k.imag < 0:
        raise EvaluationDomainError(
            f"the expansion needs Im k >= 0, got k = {k}"
        )
    return k


def logG_series(
    x: float,
    y: float,
    k: complex,
    order: int,
    spec: PotentialSpec,
    corrected: bool = True,
    force: bool = False,
) -> LogGreenSeries:
    """Partial sum of log G(x, y; k) through 1/(2ik)^order."""
    k = _check_wavenumber(k)
    regime = regime_for_point(k)
    series = expansion_series(
        x, y, order, spec, corrected=corrected, force=force, regime=regime
    )
    leading, terms = partial_sum_terms(series, k)
    partial = leading + sum(terms)
    log_gs = partial - cmath.log(2j * k)
    try:
        prefactor = -math.exp(-0.5 * spec.v_diff(x, y))
    except PotentialError:
        prefactor = None
    return LogGreenSeries(
        x=x,
        y=y,
        k=k,
        order=order,
        series=series,
        leading=leading,
        terms=tuple(terms),
        partial_sum=partial,
        log_gs=log_gs,
        gf_prefactor=prefactor,
        corrections_applied=corrected and bool(series.corrected_orders),
        validity_regime=regime,
        forced=series.forced,
    )


def G_series(
    x: float,
    y: float,
    k: complex,
    order: int,
    spec: PotentialSpec,
    corrected: bool = True,
    force: bool = False,
) -> complex:
    """Exponentiated partial sum: e^{ik(x-y)} (1 + sum b_n / (2ik)^n)."""
    k = _check_wavenumber(k)
    regime = regime_for_point(k)
    series = expansion_series(
        x, y, order, spec, corrected=corrected, force=force, regime=regime
    )
    totals = _series_totals(series)
    values: Mapping[int, float] = {j + 1: v for j, v in enumerate(totals)}
    t = 1.0 / (2j * k)
    acc = 1.0 + 0j
    tn = 1.0 + 0j
    for n in range(1, order + 1):
        tn *= t
        acc += gen_b(n).evaluate(values) * tn
    return cmath.exp(1j * k * (series.x - series.y)) * acc


# ---------------------------------------------------------------------------
# short-time form


@dataclass(frozen=True)
class ShortTimeSeries:
    """Coefficients g_1..g_order of the short-time factor 1 + sum g_n t^n,
    together with the prefactor data V(x) - V(y) and (x - y)^2."""

    x: float
    y: float
    order: int
    g: tuple[float, ...]
    v_diff: float
    sep_sq: float
    diagonal: bool


def _coefficients_mp(x, y, order: int, spec: PotentialSpec, dps: int) -> dict[int, object]:
    """a_1..a_order in mpmath precision for near-diagonal separations."""
    values: dict[int, object] = {}
    with mpmath.workdps(dps):
        xm = mpmath.mpf(x)
        ym = mpmath.mpf(y)
        for n in range(1, order + 1):
            poly = (
                gen_alpha(n, spec.expansion_basis, force=True)
                if n % 2 == 0
                else gen_s(n + 1, spec.expansion_basis, force=True)
            )
            jet_order = poly.max_order()
            if n % 2 == 0:
                values[n] = poly.evaluate(
                    spec.expansion_jet(xm, jet_order)
                ) + poly.evaluate(spec.expansion_jet(ym, jet_order))
                continue
            total = mpmath.mpf(0)
            for lo, hi in segments_between(spec, y, x):
                total += mpmath.quad(
                    lambda z: poly.evaluate(spec.expansion_jet(z, jet_order)),
                    [mpmath.mpf(lo) if math.isfinite(lo) else ym,
                     mpmath.mpf(hi) if math.isfinite(hi) else xm],
                )
            value = -total
            for rec in _inside_jumps(spec, y, x):
                if n <= 2 * rec.order + 1:
                    value += _delta_contribution(n, x, y, spec, rec, True)
                else:
                    raise DistributionProductError(
                        f"g-series needs a_{n} which is undefined at the "
                        f"order-{rec.order} jump z={rec.location}"
                    )
            values[n] = value
    return values


def shorttime_series(
    x: float,
    y: float,
    order: int,
    spec: PotentialSpec,
    dps: int | None = None,
) -> ShortTimeSeries:
    """Short-time coefficients g_n for the pair (x, y).

    Within 1e-6 * max(1, |x|) of the diagonal the exact diagonal formula
    g_n(x, x) = b_{2n}(x, x) / (2^n (2n-1)!!) is used at the midpoint; for
    separations below 0.05 the combination runs in extended precision to
    survive the inverse-separation cancellations.
    """
    if spec.mode is Mode.VS_GIVEN:
        raise PotentialError(
            "the short-time form needs the drift or the potential; "
            "a Schroedinger-potential-only input does not determine it"
        )
    hi, lo = (x, y) if x >= y else (y, x)
    sep = hi - lo
    for rec in spec.jumps:
        if hi == rec.location or lo == rec.location:
            raise EvaluationDomainError(
                f"endpoint at the jump point z={rec.location} is not allowed"
            )
    v_diff = spec.v_diff(x, y)
    sep_sq = (x - y) ** 2
    if sep <= DIAG_TOL_SCALE * max(1.0, abs(hi)):
        mid = 0.5 * (hi + lo)
        values: dict[int, float] = {}
        for j in range(1, 2 * order + 1):
            if j % 2 == 1:
                values[j] = 0.0
            else:
                poly = gen_alpha(j, spec.expansion_basis, force=True)
                values[j] = 2.0 * poly.evaluate(
                    spec.expansion_jet(mid, poly.max_order())
                )
        g = []
        for n in range(1, order + 1):
            _, _, divisor = gen_b_g(n)
            g.append(gen_b(2 * n).evaluate(values) / float(divisor))
        return ShortTimeSeries(
            x=x, y=y, order=order, g=tuple(g), v_diff=v_diff, sep_sq=sep_sq,
            diagonal=True,
        )

    if sep < NEAR_DIAG_SEP:
        dps = dps or NEAR_DIAG_DPS
        with mpmath.workdps(dps):
            values_mp = _coefficients_mp(hi, lo, order, spec, dps)
            inv = 1 / (mpmath.mpf(hi) - mpmath.mpf(lo))
            g = tuple(
                float(gen_g(n).evaluate(values_mp, inv_sep=inv))
                for n in range(1, order + 1)
            )
        return ShortTimeSeries(
            x=x, y=y, order=order, g=g, v_diff=v_diff, sep_sq=sep_sq,
            diagonal=False,
        )

    values_f: dict[int, float] = {
        n: coeff_a(n, hi, lo, spec, force=True) for n in range(1, order + 1)
    }
    inv_sep = 1.0 / sep
    g = tuple(
        gen_g(n).evaluate(values_f, inv_sep=inv_sep) for n in range(1, order + 1)
    )
    return ShortTimeSeries(
        x=x, y=y, order=order, g=g, v_diff=v_diff, sep_sq=sep_sq, diagonal=False,
    )


def shorttime_GF(
    x: float,
    y: float,
    t: float,
    order: int,
    spec: PotentialSpec,
    dps: int | None = None,
) -> float:
    """Truncated short-time Green function of the Fokker-Planck operator."""
    if t <= 0:
        raise EvaluationDomainError(f"short-time evaluation needs t > 0, got {t}")
    series = shorttime_series(x, y, order, spec, dps=dps)
    factor = 1.0
    tn = 1.0
    for value in series.g:
        tn *= t
        factor += value * tn
    prefactor = math.exp(-0.5 * series.v_diff) / math.sqrt(4.0 * math.pi * t)
    return prefactor * math.exp(-series.sep_sq / (4.0 * t)) * factor
