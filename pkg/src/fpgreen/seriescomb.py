"""Exact combinatorics for the exponentiated series and short-time forms.

An :class:`AbstractSeriesPoly` is a polynomial in abstract coefficient
symbols a_1, a_2, ... with exact rational coefficients.  A monomial is a
sorted tuple of indices; the index -1 is reserved for the formal factor
1/(x - y), so short-time combinations that mix inverse separation powers
with coefficient products live in the same type.

``gen_b_g(n)`` returns the order-n series coefficient of the
exponentiated expansion (b_n), the order-n short-time coefficient (g_n)
as a combination of b_1..b_n and inverse separation powers, and the
integer divisor 2^n (2n-1)!! of the on-diagonal formula
g_n(x, x) = b_2n(x, x) / divisor.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial
from typing import Mapping

Indices = tuple[int, ...]

INV_SEP = -1  # reserved symbol index: one factor of 1/(x - y)


class AbstractSeriesPoly:
    """Polynomial in abstract indexed symbols with rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Indices, Fraction | int] | None = None):
        clean: dict[Indices, Fraction] = {}
        if terms:
            for idx, coeff in terms.items():
                key = tuple(sorted(idx))
                c = Fraction(coeff)
                if c:
                    s = clean.get(key, Fraction(0)) + c
                    if s:
                        clean[key] = s
                    else:
                        clean.pop(key, None)
        self._terms = clean

    @classmethod
    def zero(cls) -> AbstractSeriesPoly:
        return cls({})

    @classmethod
    def one(cls) -> AbstractSeriesPoly:
        return cls({(): Fraction(1)})

    @classmethod
    def symbol(cls, index: int) -> AbstractSeriesPoly:
        return cls({(index,): Fraction(1)})

    @property
    def terms(self) -> dict[Indices, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbstractSeriesPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other) -> AbstractSeriesPoly:
        if not isinstance(other, AbstractSeriesPoly):
            return NotImplemented
        out = dict(self._terms)
        for idx, c in other._terms.items():
            s = out.get(idx, Fraction(0)) + c
            if s:
                out[idx] = s
            else:
                out.pop(idx, None)
        return AbstractSeriesPoly(out)

    def __neg__(self) -> AbstractSeriesPoly:
        return AbstractSeriesPoly({i: -c for i, c in self._terms.items()})

    def __sub__(self, other) -> AbstractSeriesPoly:
        if not isinstance(other, AbstractSeriesPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> AbstractSeriesPoly:
        if isinstance(other, AbstractSeriesPoly):
            out: dict[Indices, Fraction] = {}
            for i1, c1 in self._terms.items():
                for i2, c2 in other._terms.items():
                    key = tuple(sorted(i1 + i2))
                    s = out.get(key, Fraction(0)) + c1 * c2
                    if s:
                        out[key] = s
                    else:
                        out.pop(key, None)
            return AbstractSeriesPoly(out)
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return AbstractSeriesPoly({i: c * q for i, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def evaluate(self, values: Mapping[int, complex], inv_sep: complex | None = None):
        """Substitute numeric values; inv_sep supplies 1/(x - y) if used."""
        total = None
        for idx, c in self._terms.items():
            term = c
            for i in idx:
                if i == INV_SEP:
                    if inv_sep is None:
                        raise ValueError("term uses 1/(x - y) but inv_sep not given")
                    term = term * inv_sep
                else:
                    term = term * values[i]
            total = term if total is None else total + term
        return Fraction(0) if total is None else total

    def max_index(self) -> int:
        return max((i for idx in self._terms for i in idx if i > 0), default=0)

    def __repr__(self) -> str:
        if not self._terms:
            return "AbstractSeriesPoly(0)"
        bits = []
        for idx, c in sorted(self._terms.items()):
            names = "*".join("U" if i == INV_SEP else f"a{i}" for i in idx) or "1"
            bits.append(f"{c}*{names}")
        return f"AbstractSeriesPoly({' + '.join(bits)})"


_lock = threading.Lock()
_b_cache: dict[int, AbstractSeriesPoly] = {0: AbstractSeriesPoly.one()}


def gen_b(n: int) -> AbstractSeriesPoly:
    """Order-n coefficient of exp(sum a_j t^j), exact in the a-symbols.

    Uses the logarithmic-derivative recurrence n b_n = sum_j j a_j b_{n-j}.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    with _lock:
        top = max(_b_cache)
        for m in range(top + 1, n + 1):
            acc = AbstractSeriesPoly.zero()
            for j in range(1, m + 1):
                acc = acc + AbstractSeriesPoly.symbol(j) * _b_cache[m - j] * Fraction(j)
            _b_cache[m] = acc * Fraction(1, m)
        return _b_cache[n]


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def gen_g(n: int) -> AbstractSeriesPoly:
    """Order-n short-time coefficient in terms of b_m and 1/(x - y) powers."""
    if n < 1:
        raise ValueError("n must be >= 1")
    sign = Fraction(-1) ** n
    out = AbstractSeriesPoly.zero()
    for m in range(1, n + 1):
        num = factorial(2 * n - m - 1)
        den = factorial(m - 1) * factorial(n - m)
        inv_pow = AbstractSeriesPoly({(INV_SEP,) * (2 * n - m): Fraction(1)})
        out = out + gen_b(m) * inv_pow * (sign * Fraction(num, den))
    return out


def gen_b_g(n: int) -> tuple[AbstractSeriesPoly, AbstractSeriesPoly, Fraction]:
    """(b_n, g_n, diagonal divisor 2^n (2n-1)!!)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    divisor = Fraction(2**n * double_factorial(2 * n - 1))
    return gen_b(n), gen_g(n), divisor
