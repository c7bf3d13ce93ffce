"""Empirical remainder measurement along wavenumber rays.

remainder_report evaluates, for one geometry and truncation order N, the
remainder Delta_N(k) = log G(k) - [ik(x-y) + sum_{n<=N} a_n/(2ik)^n] at a
set of |k| samples along a ray (fixed arg k, fixed Im k, or the real axis),
returns the scaled values k^N Delta_N, and classifies their trend.  The
exact log G comes from the closed form when the builtin example provides
one on the requested geometry, and from the Riccati oracle otherwise.

Corrections follow the ray's regime unless overridden: jump corrections are
applied for sector and half-plane rays (where they give the true
coefficients) and withheld on the real axis (where the scaled remainder of
the plain series is exactly the quantity whose finite limit is predicted).
"""

from __future__ import annotations

import cmath
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .closedform import closed_form_available, exact_logG
from .errors import ConvergenceError, EvaluationDomainError, UnsupportedDomainError
from .engine import expansion_series, partial_sum_terms
from .potential import PotentialSpec
from .riccati import DEFAULT_CONFIG, OracleConfig, oracle_logG
from .validity import Regime

__all__ = [
    "Ray",
    "parse_ray",
    "RemainderSample",
    "RemainderReport",
    "remainder_report",
    "TREND_VANISHING",
    "TREND_FINITE",
    "TREND_DIVERGENT",
]

TREND_VANISHING = "vanishing"
TREND_FINITE = "finite-limit"
TREND_DIVERGENT = "divergent"

_SLOPE_BAND = 0.4


@dataclass(frozen=True)
class Ray:
    """A one-parameter family of wavenumbers indexed by |k|."""

    kind: str  # "sector" | "imline" | "real"
    parameter: float = 0.0

    def wavenumber(self, magnitude: float) -> complex:
        if magnitude <= 0.0:
            raise EvaluationDomainError(f"|k| samples must be positive, got {magnitude}")
        if self.kind == "sector":
            return magnitude * cmath.exp(1j * self.parameter)
        if self.kind == "imline":
            b = self.parameter
            if magnitude < abs(b):
                raise EvaluationDomainError(
                    f"imline ray with Im k = {b:g} needs |k| >= {abs(b):g}, got {magnitude:g}"
                )
            return complex(math.sqrt(magnitude * magnitude - b * b), b)
        return complex(magnitude, 0.0)

    @property
    def regime(self) -> Regime:
        if self.kind == "sector":
            return Regime.SECTOR
        if self.kind == "imline":
            return Regime.HALF_PLANE
        return Regime.REAL_AXIS

    def describe(self) -> str:
        if self.kind == "sector":
            return f"sector:{self.parameter:g}"
        if self.kind == "imline":
            return f"imline:{self.parameter:g}"
        return "real"


def _parse_angle(text: str) -> float:
    """Angles accept plain floats plus the forms pi, pi/4, 3pi/4, 0.5pi."""
    text = text.strip().lower()
    if "pi" in text:
        head, _, tail = text.partition("pi")
        head = head.strip()
        tail = tail.strip()
        factor = 1.0 if head in ("", "+") else -1.0 if head == "-" else float(head)
        divisor = 1.0
        if tail:
            if not tail.startswith("/"):
                raise EvaluationDomainError(f"cannot parse angle {text!r}")
            divisor = float(tail[1:])
        return factor * math.pi / divisor
    return float(text)


def parse_ray(text: str) -> Ray:
    """Parse a ray spec: 'real', 'sector:THETA', or 'imline:B'."""
    text = text.strip()
    if text == "real":
        return Ray("real")
    kind, sep, arg = text.partition(":")
    if not sep or kind not in ("sector", "imline"):
        raise EvaluationDomainError(
            f"unknown ray spec {text!r}; expected 'real', 'sector:THETA' or 'imline:B'"
        )
    try:
        value = _parse_angle(arg) if kind == "sector" else float(arg)
    except ValueError:
        raise EvaluationDomainError(f"cannot parse ray parameter in {text!r}") from None
    if kind == "sector" and not 0.0 < value < math.pi:
        raise EvaluationDomainError(
            f"sector ray needs 0 < theta < pi, got {value:g}"
        )
    if kind == "imline" and value <= 0.0:
        raise EvaluationDomainError(f"imline ray needs Im k > 0, got {value:g}")
    return Ray(kind, value)


@dataclass(frozen=True)
class RemainderSample:
    k: complex
    k_abs: float
    delta: complex
    scaled_abs: float  # |k^N Delta_N|
    source: str  # "closed-form" or "riccati"


@dataclass(frozen=True)
class RemainderReport:
    spec_name: str | None
    x: float
    y: float
    order: int
    ray: str
    corrected: bool
    samples: tuple[RemainderSample, ...]
    trend: str
    limit: float | None
    errors: tuple[str, ...]

    def record(self) -> dict:
        return {
            "spec": self.spec_name,
            "x": self.x,
            "y": self.y,
            "N": self.order,
            "ray": self.ray,
            "corrected": self.corrected,
            "samples": [
                {
                    "k": [s.k.real, s.k.imag],
                    "abs_k": s.k_abs,
                    "delta": [s.delta.real, s.delta.imag],
                    "abs_kN_delta": s.scaled_abs,
                    "source": s.source,
                }
                for s in self.samples
            ],
            "trend": self.trend,
            "limit": self.limit,
            "errors": list(self.errors),
        }


def _tail_slope(points: Sequence[tuple[float, float]]) -> float:
    """Median slope over all point pairs (robust to a single outlier)."""
    slopes = [
        (y2 - y1) / (x2 - x1)
        for i, (x1, y1) in enumerate(points)
        for (x2, y2) in points[i + 1:]
        if x2 != x1
    ]
    return statistics.median(slopes)


def _classify(samples: Sequence[RemainderSample]) -> tuple[str, float | None]:
    """Trend of |k^N Delta_N| from the decade structure of the sample tail.

    With six or more tail points the slope is measured on block maxima (an
    upper-envelope estimate), so an oscillation without decay reads as a
    finite limsup instead of whatever phase the last samples landed on;
    power-law decay and growth give the same slope either way.
    """
    if len(samples) < 3:
        return TREND_FINITE, (samples[-1].scaled_abs if samples else None)
    tail = samples[max(len(samples) // 2, len(samples) - 6):]
    if any(s.scaled_abs < 1e-300 for s in tail):
        return TREND_VANISHING, 0.0
    points = [(math.log(s.k_abs), math.log(s.scaled_abs)) for s in tail]
    if len(tail) >= 6:
        step = len(points) / 3.0
        blocks = [points[round(i * step):round((i + 1) * step)] for i in range(3)]
        env = [
            (statistics.fmean(p[0] for p in block), max(p[1] for p in block))
            for block in blocks
        ]
        slope = (env[2][1] - env[0][1]) / (env[2][0] - env[0][0])
        limit_estimate = math.exp(env[2][1])
    else:
        slope = _tail_slope(points)
        limit_estimate = statistics.fmean(s.scaled_abs for s in samples[-3:])
    if slope < -_SLOPE_BAND:
        return TREND_VANISHING, 0.0
    if slope > _SLOPE_BAND:
        return TREND_DIVERGENT, None
    return TREND_FINITE, limit_estimate


def _resolve_logG(
    spec: PotentialSpec,
    x: float,
    y: float,
    k: complex,
    partial_im: float,
    oracle: str,
    cfg: OracleConfig,
) -> tuple[complex, str]:
    use_closed = oracle == "closed-form" or (
        oracle == "auto" and closed_form_available(spec.name, x, y, k)
    )
    if use_closed:
        return exact_logG(spec.name, x, y, k, im_ref=partial_im), "closed-form"
    return oracle_logG(x, y, k, spec, cfg).log_g, "riccati"


def remainder_report(
    spec: PotentialSpec,
    x: float,
    y: float,
    order: int,
    ray: Ray | str,
    k_samples: Sequence[float],
    corrected: bool | None = None,
    oracle: str = "auto",
    cfg: OracleConfig = DEFAULT_CONFIG,
    threads: int = 1,
) -> RemainderReport:
    """Measure k^N Delta_N along a ray and classify its trend.

    k_samples are |k| magnitudes, strictly increasing.  corrected=None picks
    the regime default (corrections on except on the real axis); oracle is
    one of "auto", "closed-form", "riccati".
    """
    if isinstance(ray, str):
        ray = parse_ray(ray)
    if oracle not in ("auto", "closed-form", "riccati"):
        raise EvaluationDomainError(
            f"oracle must be auto, closed-form or riccati, got {oracle!r}"
        )
    magnitudes = [float(m) for m in k_samples]
    if len(magnitudes) < 1:
        raise EvaluationDomainError("at least one |k| sample is required")
    if any(b <= a for a, b in zip(magnitudes, magnitudes[1:])):
        raise EvaluationDomainError("|k| samples must be strictly increasing")
    if corrected is None:
        corrected = ray.regime is not Regime.REAL_AXIS

    series = expansion_series(
        x, y, order, spec, corrected=corrected, force=True, regime=ray.regime
    )

    def measure(magnitude: float) -> RemainderSample | str:
        k = ray.wavenumber(magnitude)
        leading, terms = partial_sum_terms(series, k)
        partial = leading + sum(terms)
        try:
            log_g, source = _resolve_logG(spec, x, y, k, partial.imag, oracle, cfg)
        except (ConvergenceError, EvaluationDomainError, UnsupportedDomainError) as exc:
            return f"|k| = {magnitude:g}: {type(exc).__name__}: {exc}"
        delta = log_g - partial
        return RemainderSample(
            k=k,
            k_abs=abs(k),
            delta=delta,
            scaled_abs=abs(k) ** order * abs(delta),
            source=source,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(measure, magnitudes))
    else:
        outcomes = [measure(m) for m in magnitudes]

    samples = tuple(o for o in outcomes if isinstance(o, RemainderSample))
    errors = tuple(o for o in outcomes if isinstance(o, str))
    if not samples:
        raise ConvergenceError(
            "no remainder sample could be evaluated: " + "; ".join(errors)
        )
    trend, limit = _classify(samples)
    return RemainderReport(
        spec_name=spec.name,
        x=float(x),
        y=float(y),
        order=order,
        ray=ray.describe(),
        corrected=corrected,
        samples=samples,
        trend=trend,
        limit=limit,
        errors=errors,
    )
