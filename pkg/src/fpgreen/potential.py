"""Potential specifications for the drift f, potential V, and Schrodinger
potential V_S, linked by f = -V'/2 and V_S = f^2 + f'.

A PotentialSpec holds an ordered sequence of half-open pieces covering the
real line, each with a smooth closed-form expression of the quantity the
user supplied (mode F_GIVEN, V_GIVEN, or VS_GIVEN with an energy shift E0).
Derived representations, detected derivative jumps, and tail classifications
are populated at construction time; the object is immutable afterwards.

Discontinuities are structural: abs/sign/step are not expression nodes, so
every jump sits at an explicit piece boundary.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence, Union

import mpmath
from scipy.integrate import quad

from . import expr as ex
from .diffpoly import Basis
from .errors import ParseError, PotentialError

JUMP_REL_TOL = 1e-9
DETECT_MAX_ORDER_DEFAULT = 12

AIRY_E0 = 1.0187929716474714


class Mode(str, Enum):
    F_GIVEN = "f"
    V_GIVEN = "V"
    VS_GIVEN = "VS"


class TailKind(str, Enum):
    DECAYS = "decays-to-zero"
    FINITE = "finite-limit"
    DIVERGES_SUBEXP = "diverges-subexponential"
    DIVERGES_OTHER = "diverges-other"


@dataclass(frozen=True)
class Tail:
    kind: TailKind
    limit: float | None = None

    @property
    def is_finite(self) -> bool:
        return self.kind in (TailKind.DECAYS, TailKind.FINITE)

    @property
    def is_subexponential(self) -> bool:
        return self.kind is not TailKind.DIVERGES_OTHER


@dataclass(frozen=True)
class JumpRecord:
    location: float
    order: int
    magnitude: float


Piece = tuple[float, float, ex.ExprAST]
Parsed = Union[ex.ExprAST, tuple]


# -- parsing ------------------------------------------------------------------


def parse_potential(text: str):
    """Parse a potential expression.  Returns an ExprAST for a plain
    expression, or a tuple of (lo, hi, ExprAST) pieces for
    piecewise((z < a, expr), ..., (z >= b, expr)) input, where the
    conditions are matched first-to-last and must tile the real line."""
    p = ex.Parser(text)
    tok = p.peek()
    if tok is not None and tok.kind == "name" and tok.text == "piecewise":
        p.next()
        p.expect("(")
        clauses = []
        while True:
            p.expect("(")
            op, bound = p.parse_condition()
            p.expect(",")
            node = p.parse_sum()
            p.expect(")")
            clauses.append((op, bound, node))
            nxt = p.next()
            if nxt.text == ")":
                break
            if nxt.text != ",":
                raise ParseError(f"expected ',' or ')', found {nxt.text!r}", nxt.pos)
        if not p.at_end():
            trailing = p.peek()
            raise ParseError(f"unexpected trailing input {trailing.text!r}", trailing.pos)
        return _pieces_from_clauses(clauses)
    node = p.parse_sum()
    if not p.at_end():
        trailing = p.peek()
        raise ParseError(f"unexpected trailing input {trailing.text!r}", trailing.pos)
    return node


def _pieces_from_clauses(clauses) -> tuple[Piece, ...]:
    pieces: list[Piece] = []
    left: Fraction | None = None
    closed = False
    for i, (op, bound, node) in enumerate(clauses):
        if closed:
            raise ParseError("no conditions may follow a z >= clause")
        if op == "<":
            if left is not None and bound <= left:
                raise ParseError("piecewise conditions must advance to the right")
            lo = -math.inf if left is None else float(left)
            pieces.append((lo, float(bound), node))
            left = bound
        else:
            if left is None or bound != left:
                raise ParseError(
                    "a z >= bound must equal the boundary of the preceding clause"
                )
            pieces.append((float(bound), math.inf, node))
            closed = True
    if not closed:
        raise ParseError("piecewise conditions must cover the real line (end with z >= ...)")
    return tuple(pieces)


def as_pieces(parsed: Parsed) -> tuple[Piece, ...]:
    if isinstance(parsed, tuple):
        return parsed
    return ((-math.inf, math.inf, parsed),)


def _format_boundary(b: float) -> str:
    if float(b).is_integer():
        return str(int(b))
    return repr(float(b))


def print_potential(pieces: Sequence[Piece]) -> str:
    """Canonical text for a piece sequence; re-parsing yields equal pieces."""
    pieces = list(pieces)
    if len(pieces) == 1:
        return ex.print_expr(pieces[0][2])
    clauses = []
    for lo, hi, node in pieces[:-1]:
        clauses.append(f"(z < {_format_boundary(hi)}, {ex.print_expr(node)})")
    lo, hi, node = pieces[-1]
    clauses.append(f"(z >= {_format_boundary(lo)}, {ex.print_expr(node)})")
    return "piecewise(" + ", ".join(clauses) + ")"


# -- the spec -----------------------------------------------------------------


class PotentialSpec:
    """Immutable bundle of a potential's pieces, derived links, jumps, tails."""

    def __init__(
        self,
        mode: Mode,
        pieces: Sequence[Piece],
        *,
        e0: float = 0.0,
        name: str | None = None,
        declared_jumps: Sequence[JumpRecord] = (),
        monotone_tail_assertion: bool = False,
        numeric_f: Callable[[float], float] | None = None,
        tails: tuple[Tail, Tail] | None = None,
        notes: Sequence[str] = (),
        detect_order: int = DETECT_MAX_ORDER_DEFAULT,
    ):
        self.mode = Mode(mode)
        self.pieces = tuple((float(lo), float(hi), node) for lo, hi, node in pieces)
        self._validate_pieces()
        self.e0 = float(e0)
        self.name = name
        self.monotone_tail_assertion = bool(monotone_tail_assertion)
        self.numeric_f = numeric_f
        self.notes = tuple(notes)

        self._f_pieces: tuple[ex.ExprAST, ...] | None = None
        self._v_pieces: tuple[ex.ExprAST, ...] | None = None
        self._vs_pieces: tuple[ex.ExprAST, ...] | None = None
        self._jet_cache: dict[tuple[str, int, int], ex.ExprAST] = {}
        self._lock = threading.Lock()
        self._links_done = False
        derive_links(self)

        for rec in declared_jumps:
            if rec.location not in self.breakpoints:
                raise PotentialError(
                    f"declared jump at {rec.location} is not a piece boundary"
                )
        auto = detect_jumps(self, detect_order)
        self.jumps = _reconcile_jumps(auto, tuple(declared_jumps), detect_order)
        self.tails = tails if tails is not None else self._classify_tails()

    # construction helpers

    def _validate_pieces(self) -> None:
        if not self.pieces:
            raise PotentialError("at least one piece is required")
        if self.pieces[0][0] != -math.inf or self.pieces[-1][1] != math.inf:
            raise PotentialError("pieces must cover the real line")
        for (lo, hi, _), (lo2, _, _) in zip(self.pieces, self.pieces[1:]):
            if hi != lo2:
                raise PotentialError("pieces must be contiguous")
            if not lo < hi:
                raise PotentialError("piece intervals must be nonempty")
        for lo, hi, _ in self.pieces:
            if not lo < hi:
                raise PotentialError("piece intervals must be nonempty")

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(hi for _, hi, _ in self.pieces[:-1])

    @property
    def expansion_basis(self) -> Basis:
        return Basis.VS_BASIS if self.mode is Mode.VS_GIVEN else Basis.F_BASIS

    # evaluation

    def piece_index(self, z: float, side: int = 1) -> int:
        z = float(z)
        for i, (lo, hi, _) in enumerate(self.pieces):
            if lo < z < hi:
                return i
            if z == lo:
                return i if side >= 0 else i - 1
        raise PotentialError(f"no piece contains {z}")

    def _pieces_for(self, which: str) -> tuple[ex.ExprAST, ...]:
        table = {"f": self._f_pieces, "v": self._v_pieces, "vs": self._vs_pieces}
        got = table[which]
        if got is None:
            raise PotentialError(
                f"representation {which!r} is unavailable in mode {self.mode.value}"
            )
        return got

    def _jet_ast(self, which: str, idx: int, order: int) -> ex.ExprAST:
        key = (which, idx, order)
        cached = self._jet_cache.get(key)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._jet_cache.get(key)
            if cached is not None:
                return cached
            if order == 0:
                node = self._pieces_for(which)[idx]
            else:
                node = ex._d(self._jet_ast(which, idx, order - 1))
            self._jet_cache[key] = node
            return node

    def jet(self, which: str, z, n: int, side: int = 1) -> list:
        idx = self.piece_index(float(z), side)
        return [ex.evaluate(self._jet_ast(which, idx, m), z) for m in range(n + 1)]

    def f_jet(self, z, n: int, side: int = 1) -> list:
        return self.jet("f", z, n, side)

    def vs_jet(self, z, n: int, side: int = 1) -> list:
        return self.jet("vs", z, n, side)

    def expansion_jet(self, z, n: int, side: int = 1) -> list:
        which = "vs" if self.mode is Mode.VS_GIVEN else "f"
        return self.jet(which, z, n, side)

    def f_value(self, z, side: int = 1):
        if self._f_pieces is None and self.numeric_f is not None:
            return self.numeric_f(float(z))
        return self.jet("f", z, 0, side)[0]

    def vs_value(self, z, side: int = 1):
        return self.jet("vs", z, 0, side)[0]

    def v_diff(self, x: float, y: float) -> float:
        """V(x) - V(y)."""
        if self._v_pieces is not None:
            vx = ex.evaluate(self._jet_ast("v", self.piece_index(x), 0), float(x))
            vy = ex.evaluate(self._jet_ast("v", self.piece_index(y), 0), float(y))
            return vx - vy
        if self._f_pieces is not None:
            total = 0.0
            for a, b in segments_between(self, y, x):
                idx = self.piece_index(0.5 * (a + b))
                node = self._jet_ast("f", idx, 0)
                val, _ = quad(
                    lambda t: ex.evaluate(node, t), a, b, epsabs=1e-12, epsrel=1e-12
                )
                total += val
            return -2.0 * total
        raise PotentialError("V is unavailable in VS mode")

    def drift(self, z: float, side: int = 1) -> float:
        """Numeric drift value for the scattering oracle."""
        if self._f_pieces is not None:
            return float(self.f_value(z, side))
        if self.numeric_f is not None:
            return float(self.numeric_f(float(z)))
        raise PotentialError("drift is unavailable: no f pieces and no numeric hook")

    # tails

    def _classify_tails(self) -> tuple[Tail, Tail]:
        return (self._classify_tail(-1), self._classify_tail(+1))

    def _classify_tail(self, direction: int) -> Tail:
        outer = self.pieces[0][2] if direction < 0 else self.pieces[-1][2]
        use_vs = self._f_pieces is None
        if not use_vs:
            which = "f"
            node = outer if self.mode is Mode.F_GIVEN else (
                self._f_pieces[0] if direction < 0 else self._f_pieces[-1]
            )
            if isinstance(node, ex.Const):
                c = float(node.value)
                return Tail(TailKind.DECAYS, 0.0) if c == 0 else Tail(TailKind.FINITE, c)
        else:
            which = "vs"
        idx = 0 if direction < 0 else len(self.pieces) - 1
        base = max(10.0, max((abs(b) for b in self.breakpoints), default=0.0) + 1.0)
        zs = [direction * base, direction * 2 * base, direction * 4 * base]
        node = self._jet_ast(which, idx, 0)
        try:
            vals = [ex.evaluate(node, t) for t in zs]
        except (OverflowError, ValueError):
            return Tail(TailKind.DIVERGES_OTHER, None)
        if use_vs:
            vals = [math.sqrt(abs(v)) for v in vals]
        return _tail_from_samples(vals, [abs(t) for t in zs], magnitude_only=use_vs)


def _tail_from_samples(vals, zs, magnitude_only: bool) -> Tail:
    """Heuristic classification from samples at three geometrically spaced
    points.  Decaying: final magnitude negligible, or a geometric
    extrapolation of the sample differences lands near zero.  Finite:
    samples nearly equal, or the extrapolated limit is well separated from
    zero.  Diverging: growing samples; exponential (diverges-other) when the
    per-unit log growth rate is at least 0.05 and does not slacken."""
    a1, a2, a3 = (abs(v) for v in vals)
    if a3 <= 1e-8:
        return Tail(TailKind.DECAYS, 0.0)
    near_equal = abs(vals[2] - vals[1]) <= 1e-3 * max(1.0, a3) and abs(
        vals[1] - vals[0]
    ) <= 1e-2 * max(1.0, a2)
    if near_equal:
        limit = None if magnitude_only else float(vals[2])
        return Tail(TailKind.FINITE, limit)
    if a3 >= a1:
        g1 = (math.log(a2) - math.log(a1)) / (zs[1] - zs[0])
        g2 = (math.log(a3) - math.log(a2)) / (zs[2] - zs[1])
        if g2 > 0.05 and g2 >= 0.6 * g1:
            return Tail(TailKind.DIVERGES_OTHER, None)
        return Tail(TailKind.DIVERGES_SUBEXP, None)
    d1, d2 = vals[1] - vals[0], vals[2] - vals[1]
    limit = None
    if d1 != 0:
        r = d2 / d1
        if 0 < r < 0.95:
            limit = vals[2] + d2 * r / (1 - r)
    if limit is not None and abs(limit) > max(1e-6, 0.25 * a3):
        return Tail(TailKind.FINITE, None if magnitude_only else float(limit))
    return Tail(TailKind.DECAYS, 0.0)


# -- link derivation ----------------------------------------------------------


def derive_links(spec: PotentialSpec) -> PotentialSpec:
    """Populate the representations derivable from the given mode:
    V_GIVEN gains f = -V'/2; F_GIVEN and V_GIVEN gain V_S = f^2 + f';
    VS_GIVEN derives nothing further.  Idempotent."""
    if spec._links_done:
        return spec
    given = tuple(node for _, _, node in spec.pieces)
    if spec.mode is Mode.F_GIVEN:
        spec._f_pieces = given
        spec._v_pieces = None
    elif spec.mode is Mode.V_GIVEN:
        spec._v_pieces = given
        spec._f_pieces = tuple(
            ex.neg(ex.div(ex._d(node), ex.const(2))) for node in given
        )
    else:
        spec._vs_pieces = given
        spec._f_pieces = None
        spec._v_pieces = None
        spec._links_done = True
        return spec
    spec._vs_pieces = tuple(
        ex.add(ex.pow_(node, 2), ex._d(node)) for node in spec._f_pieces
    )
    spec._links_done = True
    return spec


# -- jump detection -----------------------------------------------------------


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= JUMP_REL_TOL * max(1.0, abs(a), abs(b))


def detect_jumps(spec: PotentialSpec, max_order: int = DETECT_MAX_ORDER_DEFAULT):
    """Detect derivative jumps of the drift at piece boundaries.

    For modes with f pieces, probes one-sided limits of f^(m) and returns,
    per boundary, the smallest m where they differ (relative tolerance
    1e-9), as JumpRecord(location, M=m, C=right-left).  In VS mode the
    probe runs on V_S^(m); a jump of magnitude C in V_S^(m) at a point
    where lower V_S derivatives are continuous implies the same jump in
    f^(m+1), so the record carries M=m+1 with the same C.
    Boundaries smooth through max_order yield no record.
    """
    which = "vs" if spec.mode is Mode.VS_GIVEN else "f"
    shift = 1 if which == "vs" else 0
    records: list[JumpRecord] = []
    for i, z0 in enumerate(spec.breakpoints):
        for m in range(max_order + 1):
            left = ex.evaluate(spec._jet_ast(which, i, m), z0)
            right = ex.evaluate(spec._jet_ast(which, i + 1, m), z0)
            if not _close(left, right):
                records.append(JumpRecord(z0, m + shift, right - left))
                break
    return tuple(records)


def _reconcile_jumps(auto, declared, max_order: int):
    if not declared:
        return auto
    auto_by_loc = {rec.location: rec for rec in auto}
    merged = dict(auto_by_loc)
    for rec in declared:
        found = auto_by_loc.get(rec.location)
        if found is None:
            if rec.order <= max_order:
                warnings.warn(
                    f"declared jump at {rec.location} not detected; "
                    "auto-detection wins and the declaration is dropped"
                )
            else:
                merged[rec.location] = rec
            continue
        if found.order < rec.order:
            raise PotentialError(
                f"declared jump order {rec.order} at {rec.location} is inconsistent: "
                f"derivative order {found.order} already differs between sides"
            )
        if found.order == rec.order and not _close(found.magnitude, rec.magnitude):
            warnings.warn(
                f"declared jump magnitude {rec.magnitude} at {rec.location} "
                f"disagrees with detected {found.magnitude}; auto-detection wins"
            )
        if found.order > rec.order:
            warnings.warn(
                f"declared jump order {rec.order} at {rec.location} "
                f"disagrees with detected {found.order}; auto-detection wins"
            )
    return tuple(sorted(merged.values(), key=lambda r: r.location))


def segments_between(spec: PotentialSpec, y: float, x: float):
    """Split [y, x] at interior piece boundaries; returns (a, b) pairs."""
    lo, hi = (y, x) if y <= x else (x, y)
    cuts = [lo] + [b for b in spec.breakpoints if lo < b < hi] + [hi]
    segs = [(a, b) for a, b in zip(cuts, cuts[1:]) if a < b]
    return segs if y <= x else [(b, a) for a, b in reversed(segs)]


# -- builtins -----------------------------------------------------------------


def _airy_drift(e0: float) -> Callable[[float], float]:
    def f(z: float) -> float:
        w = mpmath.mpf(abs(z)) - e0
        u = mpmath.airyai(w, 1) / mpmath.airyai(w)
        return float(u) if z >= 0 else -float(u)

    return f


_BUILTIN_DEFS = {
    "ex1": dict(
        mode=Mode.V_GIVEN,
        text="2*z",
        tails=(Tail(TailKind.FINITE, -1.0), Tail(TailKind.FINITE, -1.0)),
    ),
    "ex2": dict(
        mode=Mode.V_GIVEN,
        text="z^2",
        tails=(Tail(TailKind.DIVERGES_SUBEXP), Tail(TailKind.DIVERGES_SUBEXP)),
    ),
    "ex3": dict(
        mode=Mode.V_GIVEN,
        text="exp(z)",
        tails=(Tail(TailKind.DECAYS, 0.0), Tail(TailKind.DIVERGES_OTHER)),
    ),
    "ex4": dict(
        mode=Mode.V_GIVEN,
        text="2*log(cosh(z))",
        tails=(Tail(TailKind.FINITE, 1.0), Tail(TailKind.FINITE, -1.0)),
    ),
    "ex5": dict(
        mode=Mode.F_GIVEN,
        text="piecewise((z < 0, 1), (z >= 0, -1))",
        tails=(Tail(TailKind.FINITE, 1.0), Tail(TailKind.FINITE, -1.0)),
    ),
    "ex6": dict(
        mode=Mode.F_GIVEN,
        text="piecewise((z < 0, -exp(z)/2), (z >= 0, -1/2))",
        tails=(Tail(TailKind.DECAYS, 0.0), Tail(TailKind.FINITE, -0.5)),
    ),
    "ex7": dict(
        mode=Mode.F_GIVEN,
        text="piecewise((z < 0, -1/(4*sqrt(1 - z))), (z >= 0, -1/(4*sqrt(1 + z))))",
        tails=(Tail(TailKind.DECAYS, 0.0), Tail(TailKind.DECAYS, 0.0)),
    ),
    "ex8": dict(
        mode=Mode.VS_GIVEN,
        text="piecewise((z < 0, -z), (z >= 0, z))",
        e0=AIRY_E0,
        tails=(Tail(TailKind.DIVERGES_SUBEXP), Tail(TailKind.DIVERGES_SUBEXP)),
        numeric_f=_airy_drift(AIRY_E0),
        notes=(
            "E0 is a truncated numerical constant (root of the Airy-derivative "
            "condition), not exact",
        ),
    ),
}

BUILTIN_NAMES = tuple(sorted(_BUILTIN_DEFS))


def builtin(name: str) -> PotentialSpec:
    """The eight built-in example potentials, with hand-verified tails."""
    try:
        spec_def = _BUILTIN_DEFS[name]
    except KeyError:
        raise PotentialError(
            f"unknown builtin {name!r}; expected one of {', '.join(BUILTIN_NAMES)}"
        ) from None
    parsed = parse_potential(spec_def["text"])
    return PotentialSpec(
        spec_def["mode"],
        as_pieces(parsed),
        e0=spec_def.get("e0", 0.0),
        name=name,
        monotone_tail_assertion=True,
        numeric_f=spec_def.get("numeric_f"),
        tails=spec_def["tails"],
        notes=spec_def.get("notes", ()),
    )


# -- definition files ---------------------------------------------------------


def parse_potential_config(text: str, name: str | None = None) -> PotentialSpec:
    """Build a spec from a plain-text key-value definition.

    Recognized keys: mode (f | V | VS), expr or pieces (potential text,
    possibly piecewise), E0, jumps (location:M:C pairs separated by
    semicolons), monotone_tails (true/false), name.
    Lines starting with # and blank lines are ignored.
    """
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise PotentialError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in fields:
            raise PotentialError(f"line {lineno}: duplicate key {key!r}")
        fields[key] = value

    known = {"mode", "expr", "pieces", "E0", "jumps", "monotone_tails", "name"}
    unknown = set(fields) - known
    if unknown:
        raise PotentialError(f"unknown keys: {', '.join(sorted(unknown))}")
    if "mode" not in fields:
        raise PotentialError("missing required key 'mode'")
    mode_text = fields["mode"]
    try:
        mode = Mode(mode_text)
    except ValueError:
        raise PotentialError(
            f"mode must be one of f, V, VS; got {mode_text!r}"
        ) from None
    body = fields.get("expr", fields.get("pieces"))
    if body is None:
        raise PotentialError("missing required key 'expr' (or 'pieces')")
    declared = []
    for chunk in filter(None, (c.strip() for c in fields.get("jumps", "").split(";"))):
        parts = chunk.split(":")
        if len(parts) != 3:
            raise PotentialError(f"jump entry {chunk!r} must be location:M:C")
        declared.append(JumpRecord(float(parts[0]), int(parts[1]), float(parts[2])))
    monotone = fields.get("monotone_tails", "false").strip().lower()
    if monotone not in ("true", "false"):
        raise PotentialError("monotone_tails must be true or false")
    return PotentialSpec(
        mode,
        as_pieces(parse_potential(body)),
        e0=float(fields.get("E0", "0")),
        name=fields.get("name", name),
        declared_jumps=declared,
        monotone_tail_assertion=(monotone == "true"),
    )


def load_potential_file(path: str) -> PotentialSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_potential_config(fh.read(), name=path)
