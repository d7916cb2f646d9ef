"""Recursive-descent parser for operator expressions.

    expr   := term {("+" | "-") term}
    term   := unary {("*" unary | "/" unary)}
    unary  := "-" unary | power
    power  := base ["^" ["-"] integer]
    base   := number | "i" | param | coord | deriv | "(" expr ")"

Products keep their written order, so ``d_x*x`` is ``x*d_x + 1``.  Divisors
and negative powers must be scalars (numbers and parameters).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

from ..algebra import I, CoordPolynomial, NotDivisible, ParamScalar, coordinate, exact_divide
from ..algebra.polynomials import COORD_NAMES
from ..algebra.scalars import PHYSICAL_PARAMETERS
from ..diffop import DiffOp


class ExpressionSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NonScalarDenominator(ValueError):
    pass


class UnknownSymbol(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> List[Token]:
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = mt.lastgroup
        out.append(Token(kind, mt.group(kind), mt.start(kind)))
        pos = mt.end()
    out.append(Token("end", "", len(text)))
    return out


# --- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Imag:
    pass


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Coord:
    index: int


@dataclass(frozen=True)
class Deriv:
    multi_index: Tuple[int, int, int, int]


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    pos: int


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int
    pos: int


Node = Union[Num, Imag, Param, Coord, Deriv, Neg, BinOp, Pow]


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            raise ExpressionSyntaxError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}", self.tok.pos)
        return self.take()

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.text in ("+", "-"):
            op = self.take()
            node = BinOp(op.text, node, self.term(), op.pos)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.take()
            node = BinOp(op.text, node, self.unary(), op.pos)
        return node

    def unary(self) -> Node:
        if self.tok.text == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        node = self.base()
        if self.tok.text == "^":
            op = self.take()
            sign = 1
            if self.tok.text == "-":
                self.take()
                sign = -1
            t = self.take()
            if t.kind != "num" or not t.text.isdigit():
                raise ExpressionSyntaxError("exponent must be an integer", t.pos)
            node = Pow(node, sign * int(t.text), op.pos)
        return node

    def base(self) -> Node:
        t = self.take()
        if t.kind == "num":
            return Num(Fraction(t.text))
        if t.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "name":
            return _name_node(t)
        raise ExpressionSyntaxError(f"unexpected {t.text or 'end of input'!r}", t.pos)


def _name_node(t: Token) -> Node:
    name = t.text
    if name == "i":
        return Imag()
    if name in COORD_NAMES:
        return Coord(COORD_NAMES.index(name))
    if name in PHYSICAL_PARAMETERS:
        return Param(name)
    if name.startswith("d_") and len(name) > 2:
        alpha = [0, 0, 0, 0]
        for ch in name[2:]:
            if ch not in COORD_NAMES:
                raise UnknownSymbol(f"bad derivative {name!r} at position {t.pos}")
            alpha[COORD_NAMES.index(ch)] += 1
        return Deriv(tuple(alpha))
    raise UnknownSymbol(f"unknown symbol {name!r} at position {t.pos}")


def parse_ast(text: str) -> Node:
    return _Parser(text).parse()


def _scalar_of(op: DiffOp, pos: int) -> ParamScalar:
    if not op:
        raise NonScalarDenominator(f"division by zero at position {pos}")
    if not op.is_scalar():
        raise NonScalarDenominator(f"denominator at position {pos} is not a scalar")
    return op.as_scalar()


def evaluate(node: Node) -> DiffOp:
    if isinstance(node, Num):
        return DiffOp.multiplication(CoordPolynomial.const(node.value))
    if isinstance(node, Imag):
        return DiffOp.multiplication(CoordPolynomial.const(ParamScalar.const(I)))
    if isinstance(node, Param):
        return DiffOp.multiplication(CoordPolynomial.const(ParamScalar.symbol(node.name)))
    if isinstance(node, Coord):
        return DiffOp.multiplication(coordinate(node.index))
    if isinstance(node, Deriv):
        return DiffOp.derivative(*node.multi_index)
    if isinstance(node, Neg):
        return -evaluate(node.operand)
    if isinstance(node, Pow):
        base = evaluate(node.base)
        if node.exponent >= 0:
            return base ** node.exponent
        s = _scalar_of(base, node.pos)
        if not s.is_monomial():
            raise NonScalarDenominator(f"negative power of a non-monomial at position {node.pos}")
        return DiffOp.multiplication(CoordPolynomial.const(s.inverse() ** -node.exponent))
    left, right = evaluate(node.left), evaluate(node.right)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    s = _scalar_of(right, node.pos)
    try:
        return left.map_coefficients(lambda c: exact_divide(c, s))
    except NotDivisible:
        raise NonScalarDenominator(f"denominator at position {node.pos} does not divide exactly") from None


def parse_operator(text: str) -> DiffOp:
    return evaluate(parse_ast(text))
