"""Expression parser for rings, series, group elements and Lie elements.

Grammar (whitespace is ignored)::

    ring   := "Q" | "Q[" gen ("," gen)* (";" cap)? "]"
    gen    := name "^" int "=0"
    cap    := "cap" ("(" name ("," name)* ")")? "=" int
    expr   := ["+" | "-"] term (("+" | "-") term)*
    term   := unary (("*" | "/")? unary)*       juxtaposition means "*"
    unary  := "-" unary | power
    power  := atom ("^" ["-" | "+"] int)?
    atom   := int | name | "t" | "O(t^" int ")" | "(" expr ")"
    group  := "(" "h" "=" expr ";" "phi" "=" expr ")"
    lie    := "(" "s" "=" expr ";" "r" "=" expr ")"

Powers of ``t`` are written explicitly as ``t^k``; ``O(t^P)`` marks the
precision of a truncated series.  Printing a value with ``str`` and parsing it
again gives a structurally equal value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from gmpy2 import mpq

from .groupg import GroupElem, LieElem
from .laurent import LaurentSeries
from .nilring import QQ, RingElem, RingSpec

KINDS = ("ring", "series", "group", "lie", "elem")

Span = Tuple[int, int]


class ParseError(ValueError):
    """Syntax or elaboration error located at ``span`` of ``text``."""

    def __init__(self, message: str, span: Span, text: str = ""):
        super().__init__(message)
        self.message = message
        self.span = span
        self.text = text

    def __str__(self):
        lo, hi = self.span
        where = f"at {lo}" if hi <= lo + 1 else f"at {lo}-{hi}"
        if not self.text:
            return f"{self.message} ({where})"
        marker = " " * lo + "^" * max(1, hi - lo)
        return f"{self.message} ({where})\n  {self.text}\n  {marker}"


# -- tokens ----------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()\[\],;=]))")


@dataclass(frozen=True)
class Token:
    kind: str  # int, name, op, end
    text: str
    span: Span


def tokenize(text: str) -> List[Token]:
    out = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", (pos, pos + 1), text)
        kind = m.lastgroup
        start = m.start(kind)
        out.append(Token(kind, m.group(kind), (start, m.end())))
        pos = m.end()
    out.append(Token("end", "", (n, n)))
    return out


# -- syntax tree ---------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    span: Span


@dataclass(frozen=True)
class Name:
    name: str
    span: Span


@dataclass(frozen=True)
class Var:
    span: Span


@dataclass(frozen=True)
class BigO:
    prec: int
    span: Span


@dataclass(frozen=True)
class Neg:
    arg: "Expr"
    span: Span


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    span: Span


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    span: Span


Expr = Union[Num, Name, Var, BigO, Neg, BinOp, Pow]


@dataclass(frozen=True)
class RingLit:
    generators: Tuple[str, ...]
    exponents: Tuple[int, ...]
    cap: Optional[int]
    cap_generators: Optional[Tuple[str, ...]]
    span: Span


@dataclass(frozen=True)
class PairLit:
    kind: str  # group or lie
    first: Expr
    second: Expr
    span: Span


Ast = Union[Expr, RingLit, PairLit]

_PAIR_NAMES = {"group": ("h", "phi"), "lie": ("s", "r")}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        span = tok.span if tok.kind != "end" else (tok.span[0], tok.span[0] + 1)
        raise ParseError(message, span, self.text)

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "name") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            self.error(f"expected {text!r}, found {found}")
        return self.advance()

    def expect_int(self, signed: bool = False) -> Tuple[int, Span]:
        start = self.tok.span[0]
        sign = 1
        if signed and self.tok.kind == "op" and self.tok.text in "+-":
            sign = -1 if self.advance().text == "-" else 1
        if self.tok.kind != "int":
            self.error("expected an integer")
        tok = self.advance()
        return sign * int(tok.text), (start, tok.span[1])

    def finish(self):
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r} after the end of the expression")

    # ring literals

    def ring(self) -> RingLit:
        start = self.tok.span[0]
        q = self.tok
        if q.kind != "name" or q.text != "Q":
            self.error("a ring starts with 'Q'")
        self.advance()
        gens, exps = [], []
        cap, cap_gens = None, None
        if self.at("["):
            self.advance()
            while True:
                if self.at("cap"):
                    if not gens:
                        self.error("a degree cap needs at least one generator")
                    cap, cap_gens = self._cap()
                    break
                if self.tok.kind != "name" or self.tok.text in ("t", "O"):
                    self.error("expected a generator name")
                name_tok = self.advance()
                if name_tok.text in gens:
                    self.error(f"generator {name_tok.text!r} given twice", name_tok)
                self.expect("^")
                e, espan = self.expect_int()
                if e < 1:
                    raise ParseError("nilpotency exponent must be >= 1", espan, self.text)
                self.expect("=")
                zero = self.tok
                if zero.kind != "int" or zero.text != "0":
                    self.error("expected '=0'")
                self.advance()
                gens.append(name_tok.text)
                exps.append(e)
                if self.at(","):
                    self.advance()
                    continue
                if self.at(";"):
                    self.advance()
                    cap, cap_gens = self._cap()
                break
            self.expect("]")
        span = (start, self.tokens[self.i - 1].span[1])
        return RingLit(tuple(gens), tuple(exps), cap, cap_gens, span)

    def _cap(self):
        self.expect("cap")
        cap_gens = None
        if self.at("("):
            self.advance()
            names = []
            while True:
                if self.tok.kind != "name":
                    self.error("expected a generator name")
                names.append(self.advance().text)
                if self.at(","):
                    self.advance()
                    continue
                break
            self.expect(")")
            cap_gens = tuple(names)
        self.expect("=")
        cap, cspan = self.expect_int()
        if cap < 1:
            raise ParseError("degree cap must be >= 1", cspan, self.text)
        return cap, cap_gens

    # series expressions

    def expr(self) -> Expr:
        start = self.tok.span[0]
        if self.at("+"):
            self.advance()
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            right = self.term()
            node = BinOp(op, node, right, (start, right.span[1]))
        return node

    def _starts_atom(self) -> bool:
        tok = self.tok
        return tok.kind in ("int", "name") or (tok.kind == "op" and tok.text == "(")

    def term(self) -> Expr:
        start = self.tok.span[0]
        node = self.unary()
        while True:
            if self.at("*") or self.at("/"):
                op = self.advance().text
            elif self._starts_atom():
                op = "*"
            else:
                return node
            right = self.unary()
            node = BinOp(op, node, right, (start, right.span[1]))

    def unary(self) -> Expr:
        if self.at("-"):
            start = self.advance().span[0]
            arg = self.unary()
            return Neg(arg, (start, arg.span[1]))
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at("^"):
            self.advance()
            if self.at("("):
                self.advance()
                k, _ = self.expect_int(signed=True)
                end = self.expect(")").span[1]
            else:
                k, (_, end) = self.expect_int(signed=True)
            if isinstance(base, BigO):
                self.error("O(...) cannot be raised to a power")
            return Pow(base, k, (base.span[0], end))
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return Num(int(tok.text), tok.span)
        if tok.kind == "name":
            self.advance()
            if tok.text == "t":
                return Var(tok.span)
            if tok.text == "O" and self.at("("):
                self.advance()
                var = self.tok
                if var.kind != "name" or var.text != "t":
                    self.error("expected 't' inside O(...)")
                self.advance()
                prec = 1
                if self.at("^"):
                    self.advance()
                    prec, _ = self.expect_int(signed=True)
                end = self.expect(")").span[1]
                return BigO(prec, (tok.span[0], end))
            return Name(tok.text, tok.span)
        if self.at("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        self.error(f"expected a number, generator, 't' or '(', found {found}")

    def pair(self, kind: str) -> PairLit:
        first_name, second_name = _PAIR_NAMES[kind]
        start = self.expect("(").span[0]
        self.expect(first_name)
        self.expect("=")
        first = self.expr()
        self.expect(";")
        self.expect(second_name)
        self.expect("=")
        second = self.expr()
        end = self.expect(")").span[1]
        return PairLit(kind, first, second, (start, end))


def parse_expr(text: str, kind: str) -> Ast:
    """Parse ``text`` as a ring, series (or ring element), group or Lie element."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    p = _Parser(text)
    if kind == "ring":
        node = p.ring()
    elif kind in ("series", "elem"):
        if p.tok.kind == "end":
            p.error("empty expression")
        node = p.expr()
    else:
        node = p.pair(kind)
    p.finish()
    return node


# -- elaboration -------------------------------------------------------------------------


class _Elaborator:
    def __init__(self, ring: RingSpec, text: str):
        self.ring = ring
        self.text = text

    def fail(self, message: str, node) -> ParseError:
        return ParseError(message, node.span, self.text)

    def series(self, node: Expr) -> LaurentSeries:
        ring = self.ring
        if isinstance(node, Num):
            return LaurentSeries.const(ring, node.value)
        if isinstance(node, Var):
            return LaurentSeries.t(ring)
        if isinstance(node, BigO):
            return LaurentSeries.zero(ring, prec=node.prec)
        if isinstance(node, Name):
            if node.name not in ring.generators:
                raise self.fail(f"unbound generator {node.name!r} (ring is {ring})", node)
            return LaurentSeries.const(ring, ring.gen(node.name))
        if isinstance(node, Neg):
            return -self.series(node.arg)
        if isinstance(node, Pow):
            base = self.series(node.base)
            try:
                return base ** node.exponent
            except (ArithmeticError, ValueError) as exc:
                raise self.fail(f"cannot raise to the power {node.exponent}: {exc}", node) from None
        if isinstance(node, BinOp):
            a, b = self.series(node.left), self.series(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            try:
                return a / b
            except (ArithmeticError, ValueError) as exc:
                raise self.fail(f"division by a non-invertible value: {exc}", node.right) from None
        raise TypeError(f"not an expression node: {node!r}")


def elaborate(ast: Ast, ring: RingSpec = QQ, text: str = ""):
    """Turn a syntax tree into a RingSpec, RingElem, LaurentSeries, GroupElem or LieElem."""
    if isinstance(ast, RingLit):
        try:
            return RingSpec(ast.generators, ast.exponents, ast.cap, ast.cap_generators)
        except ValueError as exc:
            raise ParseError(str(exc), ast.span, text) from None
    ev = _Elaborator(ring, text)
    if isinstance(ast, PairLit):
        first, second = ev.series(ast.first), ev.series(ast.second)
        try:
            if ast.kind == "group":
                return GroupElem(first, second)
            return LieElem(first, second)
        except (ArithmeticError, ValueError) as exc:
            raise ParseError(f"invalid {ast.kind} element: {exc}", ast.span, text) from None
    return ev.series(ast)


def parse_value(text: str, kind: str, ring: RingSpec = QQ):
    """parse_expr followed by elaborate; ``elem`` yields a ring element."""
    value = elaborate(parse_expr(text, kind), ring, text)
    if kind == "elem":
        if not value.is_exact() or any(d != 0 for d in value.coeffs):
            raise ParseError("a ring element cannot involve t", (0, len(text)), text)
        return value.coeffs.get(0, ring.zero)
    return value


def parse_ring(text: str) -> RingSpec:
    return parse_value(text, "ring")


def render_value(value) -> str:
    """The printed form accepted back by :func:`parse_value`."""
    if isinstance(value, (RingSpec, RingElem, LaurentSeries, GroupElem, LieElem)):
        return str(value)
    if isinstance(value, (int, type(mpq(0)))):
        return str(value)
    raise TypeError(f"cannot render {type(value).__name__}")


def kind_of(value) -> str:
    if isinstance(value, RingSpec):
        return "ring"
    if isinstance(value, RingElem):
        return "elem"
    if isinstance(value, LaurentSeries):
        return "series"
    if isinstance(value, GroupElem):
        return "group"
    if isinstance(value, LieElem):
        return "lie"
    raise TypeError(type(value).__name__)


__all__ = ["ParseError", "parse_expr", "elaborate", "parse_value", "parse_ring", "render_value", "kind_of"]
