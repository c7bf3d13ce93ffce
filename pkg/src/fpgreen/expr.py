"""Symbolic expression trees for potentials of one real variable z.

The node set is closed under differentiation: constants, the variable z,
the four arithmetic operations, integer powers, and the functions
exp, log, sqrt, sin, cos, sinh, cosh, tanh, sech.

Expressions are built through folding constructors that evaluate
constant subtrees exactly (Fraction arithmetic) and drop algebraic
identities (x + 0, 1 * x, x^1, ...).  The printer emits canonical text
whose re-parse yields the identical tree, provided the tree was built by
these constructors (the parser uses them, so parse-print round-trips).
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Callable, Union

import mpmath

from .errors import ParseError

FUNCTIONS = ("exp", "log", "sqrt", "sin", "cos", "sinh", "cosh", "tanh", "sech")


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Add:
    left: "ExprAST"
    right: "ExprAST"


@dataclass(frozen=True)
class Sub:
    left: "ExprAST"
    right: "ExprAST"


@dataclass(frozen=True)
class Mul:
    left: "ExprAST"
    right: "ExprAST"


@dataclass(frozen=True)
class Div:
    left: "ExprAST"
    right: "ExprAST"


@dataclass(frozen=True)
class Pow:
    base: "ExprAST"
    exponent: int


@dataclass(frozen=True)
class Neg:
    operand: "ExprAST"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "ExprAST"


ExprAST = Union[Const, Var, Add, Sub, Mul, Div, Pow, Neg, Call]

ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))
Z = Var()


# -- folding constructors ---------------------------------------------------


def const(value) -> Const:
    return Const(Fraction(value))


def add(a: ExprAST, b: ExprAST) -> ExprAST:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    return Add(a, b)


def sub(a: ExprAST, b: ExprAST) -> ExprAST:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if b == ZERO:
        return a
    if a == ZERO:
        return neg(b)
    return Sub(a, b)


def mul(a: ExprAST, b: ExprAST) -> ExprAST:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if a == ZERO or b == ZERO:
        return ZERO
    if a == ONE:
        return b
    if b == ONE:
        return a
    return Mul(a, b)


def div(a: ExprAST, b: ExprAST) -> ExprAST:
    if isinstance(b, Const):
        if b.value == 0:
            raise ParseError("division by constant zero")
        if isinstance(a, Const):
            return Const(a.value / b.value)
        if b == ONE:
            return a
    if a == ZERO:
        return ZERO
    return Div(a, b)


def neg(a: ExprAST) -> ExprAST:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.operand
    return Neg(a)


def pow_(base: ExprAST, exponent: int) -> ExprAST:
    if not isinstance(exponent, int):
        raise ParseError("powers must have integer exponents")
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    if isinstance(base, Const):
        if base.value == 0 and exponent < 0:
            raise ParseError("zero raised to a negative power")
        return Const(base.value**exponent)
    return Pow(base, exponent)


def call(name: str, arg: ExprAST) -> ExprAST:
    if name not in FUNCTIONS:
        raise ParseError(f"unknown function {name!r}")
    return Call(name, arg)


# -- differentiation ---------------------------------------------------------

MAX_DERIVATIVE_DEFAULT = 14


def _d(ast: ExprAST) -> ExprAST:
    if isinstance(ast, Const):
        return ZERO
    if isinstance(ast, Var):
        return ONE
    if isinstance(ast, Add):
        return add(_d(ast.left), _d(ast.right))
    if isinstance(ast, Sub):
        return sub(_d(ast.left), _d(ast.right))
    if isinstance(ast, Mul):
        return add(mul(_d(ast.left), ast.right), mul(ast.left, _d(ast.right)))
    if isinstance(ast, Div):
        num = sub(mul(_d(ast.left), ast.right), mul(ast.left, _d(ast.right)))
        return div(num, pow_(ast.right, 2))
    if isinstance(ast, Neg):
        return neg(_d(ast.operand))
    if isinstance(ast, Pow):
        inner = mul(const(ast.exponent), pow_(ast.base, ast.exponent - 1))
        return mul(inner, _d(ast.base))
    if isinstance(ast, Call):
        u, du = ast.arg, _d(ast.arg)
        table: dict[str, Callable[[], ExprAST]] = {
            "exp": lambda: call("exp", u),
            "log": lambda: div(ONE, u),
            "sqrt": lambda: div(ONE, mul(const(2), call("sqrt", u))),
            "sin": lambda: call("cos", u),
            "cos": lambda: neg(call("sin", u)),
            "sinh": lambda: call("cosh", u),
            "cosh": lambda: call("sinh", u),
            "tanh": lambda: pow_(call("sech", u), 2),
            "sech": lambda: neg(mul(call("sech", u), call("tanh", u))),
        }
        return mul(table[ast.name](), du)
    raise TypeError(f"unknown AST node {ast!r}")


def differentiate(ast: ExprAST, n: int = 1, max_n: int = MAX_DERIVATIVE_DEFAULT) -> ExprAST:
    """n-th symbolic derivative with respect to z."""
    if n < 0:
        raise ValueError("derivative order must be nonnegative")
    if n > max_n:
        raise ValueError(f"derivative order {n} exceeds the configured max {max_n}")
    for _ in range(n):
        ast = _d(ast)
    return ast


# -- evaluation ---------------------------------------------------------------


def _sech_math(t: float) -> float:
    return 1.0 / math.cosh(t)


def _sech_cmath(t: complex) -> complex:
    return 1.0 / cmath.cosh(t)


_MATH = {
    "exp": math.exp, "log": math.log, "sqrt": math.sqrt,
    "sin": math.sin, "cos": math.cos, "sinh": math.sinh,
    "cosh": math.cosh, "tanh": math.tanh, "sech": _sech_math,
}
_CMATH = {
    "exp": cmath.exp, "log": cmath.log, "sqrt": cmath.sqrt,
    "sin": cmath.sin, "cos": cmath.cos, "sinh": cmath.sinh,
    "cosh": cmath.cosh, "tanh": cmath.tanh, "sech": _sech_cmath,
}
_MPMATH = {
    "exp": mpmath.exp, "log": mpmath.log, "sqrt": mpmath.sqrt,
    "sin": mpmath.sin, "cos": mpmath.cos, "sinh": mpmath.sinh,
    "cosh": mpmath.cosh, "tanh": mpmath.tanh, "sech": mpmath.sech,
}


def evaluate(ast: ExprAST, z):
    """Evaluate at z.  Backend follows the type of z: float/int use math,
    complex uses cmath, mpmath numbers use mpmath (at current precision)."""
    if isinstance(z, (mpmath.mpf, mpmath.mpc)):
        funcs = _MPMATH

        def from_const(c: Fraction):
            return mpmath.mpf(c.numerator) / c.denominator

    elif isinstance(z, complex):
        funcs = _CMATH

        def from_const(c: Fraction):
            return complex(c)

    else:
        z = float(z)
        funcs = _MATH

        def from_const(c: Fraction):
            return float(c)

    def rec(node: ExprAST):
        if isinstance(node, Const):
            return from_const(node.value)
        if isinstance(node, Var):
            return z
        if isinstance(node, Add):
            return rec(node.left) + rec(node.right)
        if isinstance(node, Sub):
            return rec(node.left) - rec(node.right)
        if isinstance(node, Mul):
            return rec(node.left) * rec(node.right)
        if isinstance(node, Div):
            return rec(node.left) / rec(node.right)
        if isinstance(node, Neg):
            return -rec(node.operand)
        if isinstance(node, Pow):
            return rec(node.base) ** node.exponent
        if isinstance(node, Call):
            return funcs[node.name](rec(node.arg))
        raise TypeError(f"unknown AST node {node!r}")

    return rec(ast)


# -- printing -----------------------------------------------------------------

_PREC_SUM, _PREC_PROD, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _const_prec(c: Fraction) -> int:
    if c.denominator != 1:
        return _PREC_PROD if c >= 0 else min(_PREC_PROD, _PREC_UNARY)
    return _PREC_ATOM if c >= 0 else _PREC_UNARY


def _node_prec(node: ExprAST) -> int:
    if isinstance(node, Const):
        return _const_prec(node.value)
    if isinstance(node, (Add, Sub)):
        return _PREC_SUM
    if isinstance(node, (Mul, Div)):
        return _PREC_PROD
    if isinstance(node, Neg):
        return _PREC_UNARY
    if isinstance(node, Pow):
        return _PREC_POW
    return _PREC_ATOM


def print_expr(node: ExprAST, min_prec: int = _PREC_SUM) -> str:
    text = _print(node)
    if _node_prec(node) < min_prec:
        return f"({text})"
    return text


def _print(node: ExprAST) -> str:
    if isinstance(node, Const):
        return str(node.value)
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Add):
        return f"{print_expr(node.left, _PREC_SUM)} + {print_expr(node.right, _PREC_PROD)}"
    if isinstance(node, Sub):
        return f"{print_expr(node.left, _PREC_SUM)} - {print_expr(node.right, _PREC_PROD)}"
    if isinstance(node, Mul):
        return f"{print_expr(node.left, _PREC_PROD)}*{print_expr(node.right, _PREC_UNARY)}"
    if isinstance(node, Div):
        return f"{print_expr(node.left, _PREC_PROD)}/{print_expr(node.right, _PREC_UNARY)}"
    if isinstance(node, Neg):
        return f"-{print_expr(node.operand, _PREC_UNARY)}"
    if isinstance(node, Pow):
        exp = str(node.exponent)
        return f"{print_expr(node.base, _PREC_ATOM)}^{exp}"
    if isinstance(node, Call):
        return f"{node.name}({print_expr(node.arg, _PREC_SUM)})"
    raise TypeError(f"unknown AST node {node!r}")


# -- parsing ------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|>=|<=|[-+*/^(),<>]))"
)


@dataclass
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad = len(text) - len(stripped)
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        if m.lastgroup == "op" and m.group("op") == "**":
            tokens.append(_Token("op", "^", m.start("op")))
        else:
            tokens.append(_Token(m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    return tokens


class Parser:
    """Recursive-descent parser for expressions and piecewise clauses."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    # token helpers

    def peek(self) -> _Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text))
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.pos)
        return tok

    def at_end(self) -> bool:
        return self.i >= len(self.tokens)

    # grammar

    def parse_expression(self) -> ExprAST:
        node = self.parse_sum()
        return node

    def parse_sum(self) -> ExprAST:
        node = self.parse_product()
        while (tok := self.peek()) and tok.text in "+-":
            self.next()
            rhs = self.parse_product()
            node = add(node, rhs) if tok.text == "+" else sub(node, rhs)
        return node

    def parse_product(self) -> ExprAST:
        node = self.parse_unary()
        while (tok := self.peek()) and tok.text in "*/":
            self.next()
            rhs = self.parse_unary()
            try:
                node = mul(node, rhs) if tok.text == "*" else div(node, rhs)
            except ParseError as e:
                raise ParseError(str(e), tok.pos) from None
        return node

    def parse_unary(self) -> ExprAST:
        tok = self.peek()
        if tok and tok.text == "-":
            self.next()
            return neg(self.parse_unary())
        if tok and tok.text == "+":
            self.next()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> ExprAST:
        base = self.parse_atom()
        tok = self.peek()
        if tok and tok.text == "^":
            self.next()
            exp_node = self.parse_unary()
            if not (isinstance(exp_node, Const) and exp_node.value.denominator == 1):
                raise ParseError("exponent must be an integer constant", tok.pos)
            try:
                return pow_(base, int(exp_node.value))
            except ParseError as e:
                raise ParseError(str(e), tok.pos) from None
        return base

    def parse_atom(self) -> ExprAST:
        tok = self.next()
        if tok.kind == "number":
            return Const(Fraction(Decimal(tok.text)))
        if tok.kind == "name":
            if tok.text == "z":
                return Z
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.parse_sum()
                self.expect(")")
                return call(tok.text, arg)
            raise ParseError(f"unknown function or symbol {tok.text!r}", tok.pos)
        if tok.text == "(":
            node = self.parse_sum()
            self.expect(")")
            return node
        raise ParseError(f"unexpected token {tok.text!r}", tok.pos)

    # piecewise clause: a comparison of z against a constant

    def parse_condition(self) -> tuple[str, Fraction]:
        tok = self.next()
        if tok.kind != "name" or tok.text != "z":
            raise ParseError("piecewise condition must start with z", tok.pos)
        op = self.next()
        if op.text not in ("<", ">="):
            raise ParseError(
                f"condition operator must be < or >=, found {op.text!r}", op.pos
            )
        bound = self.parse_sum()
        if not isinstance(bound, Const):
            raise ParseError("condition bound must be a constant", op.pos)
        return op.text, bound.value


def parse_expression(text: str) -> ExprAST:
    """Parse a plain (non-piecewise) expression; all input must be consumed."""
    p = Parser(text)
    node = p.parse_expression()
    if not p.at_end():
        tok = p.peek()
        raise ParseError(f"unexpected trailing input {tok.text!r}", tok.pos)
    return node
