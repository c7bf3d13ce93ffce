"""Exact differential-polynomial algebra in the derivatives of one function.

A differential monomial is a finite product of derivatives of a single
unknown function of x.  It is stored as a sorted tuple of derivative
orders: ``(0, 0, 1)`` stands for u(x)^2 * u'(x) and the empty tuple for
the constant monomial 1.  A :class:`DiffPoly` maps monomials to exact
rational coefficients and supports ring arithmetic, total x-derivative,
numeric jet evaluation, and substitution of the base function by another
polynomial.

The jet variables can mean either the drift function f and its
derivatives (``Basis.F_BASIS``) or the Schroedinger potential and its
derivatives (``Basis.VS_BASIS``).  Arithmetic never mixes bases.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

from .errors import BasisError

Monomial = tuple[int, ...]


class Basis(Enum):
    """Which function the jet variables refer to."""

    F_BASIS = "f"
    VS_BASIS = "V"

    @property
    def symbol(self) -> str:
        return self.value


def monomial_weight(mon: Monomial) -> int:
    """Total derivative weight: a factor of order j contributes j + 1."""
    return sum(j + 1 for j in mon)


def _monomial_sort_key(mon: Monomial) -> tuple:
    # Graded by total weight, then by derivative orders high-to-low:
    # within equal weight, (3) precedes (2,0) precedes (1,1) precedes
    # (1,0,0) precedes (0,0,0,0).
    desc = sorted(mon, reverse=True)
    return (monomial_weight(mon), tuple(-j for j in desc))


def _coerce_coeff(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    raise TypeError(f"coefficient must be rational, got {type(value).__name__}")


class DiffPoly:
    """Polynomial in jet variables with exact rational coefficients."""

    __slots__ = ("_terms", "_basis")

    def __init__(
        self,
        terms: Mapping[Iterable[int], Fraction | int] | None = None,
        basis: Basis = Basis.F_BASIS,
    ):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mon, coeff in terms.items():
                key = tuple(sorted(mon))
                if any(j < 0 for j in key):
                    raise ValueError("derivative orders must be nonnegative")
                c = _coerce_coeff(coeff)
                if c:
                    c = clean.get(key, Fraction(0)) + c
                    if c:
                        clean[key] = c
                    else:
                        clean.pop(key, None)
        self._terms = clean
        self._basis = basis

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, basis: Basis = Basis.F_BASIS) -> DiffPoly:
        return cls({}, basis)

    @classmethod
    def constant(cls, value, basis: Basis = Basis.F_BASIS) -> DiffPoly:
        return cls({(): _coerce_coeff(value)}, basis)

    @classmethod
    def jet_var(cls, order: int = 0, basis: Basis = Basis.F_BASIS) -> DiffPoly:
        """The single jet variable u^(order)."""
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        return cls({(order,): Fraction(1)}, basis)

    # -- inspection --------------------------------------------------

    @property
    def basis(self) -> Basis:
        return self._basis

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def max_order(self) -> int:
        """Highest derivative order appearing (-1 for a constant)."""
        orders = [j for mon in self._terms for j in mon]
        return max(orders) if orders else -1

    def coefficient(self, mon: Iterable[int]) -> Fraction:
        return self._terms.get(tuple(sorted(mon)), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self._basis is other._basis and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._basis, frozenset(self._terms.items())))

    # -- arithmetic --------------------------------------------------

    def _check_basis(self, other: DiffPoly) -> None:
        if self._basis is not other._basis:
            raise BasisError(
                f"cannot combine {self._basis.name} with {other._basis.name}"
            )

    def __add__(self, other) -> DiffPoly:
        if isinstance(other, DiffPoly):
            self._check_basis(other)
            out = dict(self._terms)
            for mon, c in other._terms.items():
                s = out.get(mon, Fraction(0)) + c
                if s:
                    out[mon] = s
                else:
                    out.pop(mon, None)
            return DiffPoly(out, self._basis)
        if isinstance(other, Rational):
            return self + DiffPoly.constant(other, self._basis)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> DiffPoly:
        return DiffPoly({m: -c for m, c in self._terms.items()}, self._basis)

    def __sub__(self, other) -> DiffPoly:
        if isinstance(other, (DiffPoly, Rational)):
            return self + (-other if isinstance(other, DiffPoly) else DiffPoly.constant(-Fraction(other), self._basis))
        return NotImplemented

    def __rsub__(self, other) -> DiffPoly:
        if isinstance(other, Rational):
            return DiffPoly.constant(other, self._basis) - self
        return NotImplemented

    def __mul__(self, other) -> DiffPoly:
        if isinstance(other, DiffPoly):
            self._check_basis(other)
            out: dict[Monomial, Fraction] = {}
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    key = tuple(sorted(m1 + m2))
                    s = out.get(key, Fraction(0)) + c1 * c2
                    if s:
                        out[key] = s
                    else:
                        out.pop(key, None)
            return DiffPoly(out, self._basis)
        if isinstance(other, Rational):
            q = Fraction(other)
            if not q:
                return DiffPoly.zero(self._basis)
            return DiffPoly({m: c * q for m, c in self._terms.items()}, self._basis)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> DiffPoly:
        if isinstance(other, Rational):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int) -> DiffPoly:
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = DiffPoly.constant(1, self._basis)
        for _ in range(n):
            out = out * self
        return out

    # -- calculus ---------------------------------------------------

    def d_dx(self) -> DiffPoly:
        """Total x-derivative: Leibniz rule, order j maps to order j+1."""
        out: dict[Monomial, Fraction] = {}
        for mon, c in self._terms.items():
            for i in range(len(mon)):
                bumped = tuple(sorted(mon[:i] + (mon[i] + 1,) + mon[i + 1:]))
                s = out.get(bumped, Fraction(0)) + c
                if s:
                    out[bumped] = s
                else:
                    out.pop(bumped, None)
        return DiffPoly(out, self._basis)

    def subs(self, base: DiffPoly) -> DiffPoly:
        """Substitute the order-0 jet variable by ``base`` (and order-j by
        the j-th derivative of ``base``).  The result lives in the basis
        of ``base``."""
        n = self.max_order()
        derivs: list[DiffPoly] = [base]
        for _ in range(n):
            derivs.append(derivs[-1].d_dx())
        out = DiffPoly.zero(base.basis)
        for mon, c in self._terms.items():
            term = DiffPoly.constant(c, base.basis)
            for j in mon:
                term = term * derivs[j]
            out = out + term
        return out

    # -- numeric evaluation ------------------------------------------

    def evaluate(self, jet: Sequence):
        """Evaluate with jet[j] supplying the value of the j-th derivative.

        Works with float, complex, Fraction, or mpmath jet values.
        """
        need = self.max_order()
        if need >= len(jet):
            raise ValueError(f"jet too short: need orders up to {need}")
        total = None
        for mon, c in self._terms.items():
            term = c
            for j in mon:
                term = term * jet[j]
            total = term if total is None else total + term
        return Fraction(0) if total is None else total

    # -- rendering ----------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: _monomial_sort_key(kv[0]))

    def render(self, symbol: str | None = None) -> str:
        """Canonical plain-text form, e.g. ``-f3 - 2*f0*f2 - f1^2``."""
        if not self._terms:
            return "0"
        sym = symbol if symbol is not None else self._basis.symbol
        parts: list[str] = []
        for mon, coeff in self.sorted_terms():
            body = _render_monomial(mon, sym)
            mag = abs(coeff)
            if body:
                prefix = "" if mag == 1 else f"{mag}*"
                text = prefix + body
            else:
                text = str(mag)
            if not parts:
                parts.append(("-" if coeff < 0 else "") + text)
            else:
                parts.append(("- " if coeff < 0 else "+ ") + text)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"DiffPoly({self.render()!r}, basis={self._basis.name})"


def _render_monomial(mon: Monomial, sym: str) -> str:
    if not mon:
        return ""
    factors: list[str] = []
    i = 0
    while i < len(mon):
        j = mon[i]
        count = 1
        while i + count < len(mon) and mon[i + count] == j:
            count += 1
        factors.append(f"{sym}{j}" if count == 1 else f"{sym}{j}^{count}")
        i += count
    return "*".join(factors)


def dpoly_dx(p: DiffPoly) -> DiffPoly:
    """Total x-derivative of a differential polynomial."""
    return p.d_dx()
