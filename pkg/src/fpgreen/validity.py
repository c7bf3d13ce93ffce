"""Per-regime validity classification of the large-k expansion.

Three regimes, ordered from most to least permissive:

  SECTOR     limits along rays with arg k bounded away from 0 and pi
  HALF_PLANE limits along horizontal lines Im k = b > 0
  REAL_AXIS  limits along the real axis (Im k >= 0 boundary)

A drift-derivative jump of order M between the endpoints caps every regime
at N <= 2M+1 and contributes an additive correction (-1)^M C^2/2 to the
coefficient of order 2M+2.  Jumps outside the endpoints do not limit the
sector regime (their contribution dies exponentially along sector rays) but
cap the half-plane and real-axis regimes at N <= M, where the oscillatory
residue no longer vanishes.  The half-plane regime further requires both
drift tails to be subexponential, and the real axis requires finite drift
limits on both sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import EvaluationDomainError
from .potential import Mode, PotentialSpec

UNBOUNDED = None


class Regime(str, Enum):
    SECTOR = "sector"
    HALF_PLANE = "half-plane"
    REAL_AXIS = "real-axis"


@dataclass(frozen=True)
class ValidityReport:
    regime: Regime
    max_order: int | None
    corrections: tuple[tuple[int, float], ...]
    notes: tuple[str, ...]

    def allows(self, n: int) -> bool:
        return self.max_order is None or n <= self.max_order

    @property
    def max_order_value(self) -> float:
        return math.inf if self.max_order is None else self.max_order


def _cap_min(*caps):
    finite = [c for c in caps if c is not None]
    if not finite:
        return None
    return min(finite)


def _check_endpoints(spec: PotentialSpec, x: float, y: float) -> None:
    if not x > y:
        raise EvaluationDomainError(f"x must exceed y; got x={x}, y={y}")
    for rec in spec.jumps:
        if x == rec.location or y == rec.location:
            raise EvaluationDomainError(
                f"endpoint at jump location {rec.location} is rejected"
            )


def envelope_caps(spec: PotentialSpec, x: float, y: float) -> dict[Regime, int | None]:
    """Per-regime order caps from everything except jumps between the
    endpoints: drift tails and jumps outside (y, x).  These constraints are
    not lifted by jump corrections."""
    _check_endpoints(spec, x, y)
    outside = [r for r in spec.jumps if not (y < r.location < x)]
    left, right = spec.tails
    half_cap: int | None = None
    if not (left.is_subexponential and right.is_subexponential):
        half_cap = 0
    else:
        for r in outside:
            half_cap = _cap_min(half_cap, r.order)
    real_cap = half_cap
    if not (left.is_finite and right.is_finite):
        real_cap = 0
    return {
        Regime.SECTOR: None,
        Regime.HALF_PLANE: half_cap,
        Regime.REAL_AXIS: real_cap,
    }


def classify_validity(spec: PotentialSpec, x: float, y: float) -> dict[Regime, ValidityReport]:
    """Maximum usable expansion order per regime for endpoints y < x,
    plus the coefficient corrections owed to jumps between them."""
    _check_endpoints(spec, x, y)

    inside = [r for r in spec.jumps if y < r.location < x]
    outside = [r for r in spec.jumps if not (y < r.location < x)]
    corrections = tuple(
        sorted(
            (2 * r.order + 2, (-1) ** r.order * r.magnitude**2 / 2.0) for r in inside
        )
    )

    base_notes: list[str] = list(spec.notes)
    if not spec.monotone_tail_assertion:
        base_notes.append(
            "tail monotonicity not asserted; classification relies on sampled tails"
        )
    if spec.mode is Mode.VS_GIVEN:
        base_notes.append(
            "drift tails inferred from the Schrodinger potential (magnitude proxy)"
        )
    for r in inside:
        base_notes.append(
            f"jump of drift derivative order {r.order} at {r.location} lies between "
            f"the endpoints: caps every regime at order {2 * r.order + 1}, "
            f"correction at order {2 * r.order + 2}"
        )

    sector_cap = _cap_min(*(2 * r.order + 1 for r in inside)) if inside else None

    left, right = spec.tails
    tails_subexp = left.is_subexponential and right.is_subexponential
    tails_finite = left.is_finite and right.is_finite

    half_notes = list(base_notes)
    half_cap = sector_cap
    if not tails_subexp:
        half_cap = 0
        half_notes.append("a drift tail grows exponentially: half-plane regime invalid")
    else:
        for r in outside:
            half_cap = _cap_min(half_cap, r.order)
            half_notes.append(
                f"jump at {r.location} outside the endpoints caps the half-plane "
                f"and real-axis regimes at order {r.order}"
            )

    real_notes = list(half_notes)
    real_cap = half_cap
    if not tails_finite:
        real_cap = 0
        real_notes.append("a drift tail has no finite limit: real-axis regime invalid")

    return {
        Regime.SECTOR: ValidityReport(
            Regime.SECTOR, sector_cap, corrections, tuple(base_notes)
        ),
        Regime.HALF_PLANE: ValidityReport(
            Regime.HALF_PLANE, half_cap, corrections, tuple(half_notes)
        ),
        Regime.REAL_AXIS: ValidityReport(
            Regime.REAL_AXIS, real_cap, corrections, tuple(real_notes)
        ),
    }


def regime_for_point(k: complex) -> Regime:
    """Regime whose cap governs a pointwise evaluation at k: real k follows
    the real-axis rules, any k with Im k > 0 lies on a sector ray."""
    if k.imag == 0:
        return Regime.REAL_AXIS
    return Regime.SECTOR
