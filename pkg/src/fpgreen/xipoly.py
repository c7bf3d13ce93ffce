"""Polynomials in the auxiliary grading variable with DiffPoly coefficients.

The reflection-expansion coefficients are generated by a linear operator
acting on polynomials in an auxiliary variable (written ``xi`` in
rendering) whose coefficients are differential polynomials in f.  The
operator maps the slot-j coefficient p_j to

    -f * p_{j-1}  +  f * p_{j+1}  +  p_j' / (j + 1)

and raises the degree by exactly one.  The two xi^(-1) contributions that
arise in the derivation cancel identically; construction asserts this.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Iterable, Sequence

from .diffpoly import Basis, DiffPoly
from .errors import BasisError


class XiPoly:
    """Sequence of DiffPoly coefficients indexed by power of the grading
    variable, trimmed so the leading coefficient is nonzero."""

    __slots__ = ("_coeffs", "_basis")

    def __init__(self, coeffs: Iterable[DiffPoly], basis: Basis | None = None):
        coeffs = list(coeffs)
        for c in coeffs:
            if basis is None:
                basis = c.basis
            elif c.basis is not basis:
                raise BasisError("mixed bases in XiPoly coefficients")
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self._coeffs = tuple(coeffs)
        self._basis = basis if basis is not None else Basis.F_BASIS

    @property
    def basis(self) -> Basis:
        return self._basis

    @property
    def degree(self) -> int:
        """Degree in the grading variable; -1 for the zero polynomial."""
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> tuple[DiffPoly, ...]:
        return self._coeffs

    def coeff(self, j: int) -> DiffPoly:
        if 0 <= j < len(self._coeffs):
            return self._coeffs[j]
        return DiffPoly.zero(self._basis)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, XiPoly):
            return NotImplemented
        return self._basis is other._basis and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._basis, self._coeffs))

    def at_minus_one(self) -> DiffPoly:
        """Alternating coefficient sum: the value at grading variable -1."""
        out = DiffPoly.zero(self._basis)
        for j, p in enumerate(self._coeffs):
            out = out + (p if j % 2 == 0 else -p)
        return out

    def scale_slots(self, factors: Sequence[Fraction | int]) -> XiPoly:
        """Multiply the slot-j coefficient by factors[j]."""
        return XiPoly(
            [p * Fraction(factors[j]) for j, p in enumerate(self._coeffs)],
            self._basis,
        )

    def render(self, symbol: str | None = None, var: str = "xi") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for j, p in enumerate(self._coeffs):
            if p.is_zero():
                continue
            body = p.render(symbol)
            if j == 0:
                parts.append(body)
            else:
                power = var if j == 1 else f"{var}^{j}"
                parts.append(f"({body})*{power}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"XiPoly({self.render()!r})"


def apply_M(g: XiPoly) -> XiPoly:
    """Apply the coefficient-generating operator; degree rises by one."""
    if g.basis is not Basis.F_BASIS:
        raise BasisError("the generating operator is defined on F_BASIS only")
    if g.is_zero():
        return g
    f = DiffPoly.jet_var(0)
    # The two contributions at grading power -1 cancel identically:
    # +f*p_0 from the 1/xi multiplication and -f*g(xi=0) from its
    # compensating term.  Assert rather than assume.
    residue = f * g.coeff(0) - f * g.coeff(0)
    assert residue.is_zero(), "grading-variable^(-1) residue must vanish"
    out = []
    for j in range(g.degree + 2):
        slot = -(f * g.coeff(j - 1)) + f * g.coeff(j + 1)
        slot = slot + g.coeff(j).d_dx() * Fraction(1, j + 1)
        out.append(slot)
    return XiPoly(out, Basis.F_BASIS)


_cache_lock = threading.Lock()
_c_cache: dict[int, XiPoly] = {}


def gen_c_tilde(n: int) -> XiPoly:
    """n-th reflection-expansion coefficient; degree exactly n - 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    with _cache_lock:
        top = max(_c_cache) if _c_cache else 0
        if not _c_cache:
            _c_cache[1] = XiPoly([-DiffPoly.jet_var(0)], Basis.F_BASIS)
            top = 1
        for m in range(top + 1, n + 1):
            _c_cache[m] = apply_M(_c_cache[m - 1])
        result = _c_cache[n]
    assert result.degree == n - 1, "degree law violated"
    return result


def gen_K(n: int) -> XiPoly:
    """n-th remainder kernel: slot j of the (n+1)-th reflection
    coefficient scaled by -(1 + j)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    c = gen_c_tilde(n + 1)
    return c.scale_slots([Fraction(-(1 + j)) for j in range(c.degree + 1)])
