"""Generators for the expansion-coefficient families s_n and alpha_n.

Two independent routes produce the s_n densities:

* F basis: alternating coefficient sum of the n-th reflection-expansion
  polynomial (its value at grading variable -1).
* VS basis: the quadratic recursion s_{n+1} = s_n' + sum_{j=2}^{n-1}
  s_j s_{n+1-j}, seeded by s_2 = -V.

They agree exactly under the substitution V = f^2 + f' (verified by the
test suite up to the default order cap).

The even-order antiderivative family alpha_n satisfies
d/dx alpha_n = s_{n+1} and assembles the pointwise part of the even log
coefficients.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from .diffpoly import Basis, DiffPoly, dpoly_dx
from .errors import OrderLimitError
from .xipoly import gen_c_tilde

MAX_ORDER_DEFAULT = 12

_lock = threading.Lock()
_s_cache: dict[tuple[int, Basis], DiffPoly] = {}
_alpha_cache: dict[tuple[int, Basis], DiffPoly] = {}


def _check_order(n: int, force: bool) -> None:
    if n > MAX_ORDER_DEFAULT and not force:
        raise OrderLimitError(
            f"order {n} exceeds the default cap {MAX_ORDER_DEFAULT}; "
            "pass force=True to generate it anyway"
        )


def gen_s(n: int, basis: Basis = Basis.F_BASIS, force: bool = False) -> DiffPoly:
    """n-th S-expansion density as an exact differential polynomial."""
    if basis is Basis.F_BASIS:
        if n < 1:
            raise ValueError("n must be >= 1 in the F basis")
    else:
        if n < 2:
            raise ValueError("n must be >= 2 in the VS basis (s_1 has no VS form)")
    _check_order(n, force)
    key = (n, basis)
    with _lock:
        if key in _s_cache:
            return _s_cache[key]
    if basis is Basis.F_BASIS:
        result = gen_c_tilde(n).at_minus_one()
    else:
        result = _gen_s_vs(n)
    with _lock:
        _s_cache[key] = result
    return result


def _gen_s_vs(n: int) -> DiffPoly:
    polys: dict[int, DiffPoly] = {2: -DiffPoly.jet_var(0, Basis.VS_BASIS)}
    for m in range(2, n):
        nxt = polys[m].d_dx()
        for j in range(2, m):
            nxt = nxt + polys[j] * polys[m + 1 - j]
        polys[m + 1] = nxt
    return polys[n]


def _compositions(total: int, parts: int):
    """Ordered tuples of positive integers of given length summing to total."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def gen_alpha(n: int, basis: Basis = Basis.F_BASIS, force: bool = False) -> DiffPoly:
    """Even-order pointwise coefficient with d/dx alpha_n = s_{n+1}."""
    if n < 2 or n % 2:
        raise ValueError("n must be an even integer >= 2")
    _check_order(n, force)
    key = (n, basis)
    with _lock:
        if key in _alpha_cache:
            return _alpha_cache[key]
    i = n // 2
    result = DiffPoly.zero(basis)
    for m in range(1, i + 1):
        coeff = Fraction(2**m, m)
        block = DiffPoly.zero(basis)
        for combo in _compositions(i, m):
            term = DiffPoly.constant(1, basis)
            for j in combo:
                term = term * gen_s(2 * j, basis, force=force)
            block = block + term
        result = result + block * coeff
    result = result * Fraction(1, 2)
    with _lock:
        _alpha_cache[key] = result
    return result


def vs_to_f(p: DiffPoly) -> DiffPoly:
    """Convert a VS-basis polynomial to the F basis via V = f^2 + f'."""
    f = DiffPoly.jet_var(0, Basis.F_BASIS)
    fp = DiffPoly.jet_var(1, Basis.F_BASIS)
    return p.subs(f * f + fp)


def s_by_name(kind: str, n: int, basis: Basis, force: bool = False) -> DiffPoly:
    """Dispatch helper used by the CLI: kind in {s, alpha}."""
    if kind == "s":
        return gen_s(n, basis, force=force)
    if kind == "alpha":
        return gen_alpha(n, basis, force=force)
    raise ValueError(f"unknown coefficient family {kind!r}")


def dalpha_matches_s(i: int) -> bool:
    """Check the antiderivative identity for one even order 2i."""
    return dpoly_dx(gen_alpha(2 * i)) == gen_s(2 * i + 1)
