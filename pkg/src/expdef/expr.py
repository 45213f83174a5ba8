"""Expression grammar shared by the CLI parsers and witness recipes.

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" ["-"] INT)?
    atom    := NUMBER | "tau" | "z" "(" INT ")" | NAME "(" expr ")" | NAME | "(" expr ")"

NUMBER is a nonnegative integer (``3/4`` parses as a division). NAME
followed by a parenthesis is a call: E, log, numer, denom.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .cyclotomic import CycNum, zeta
from .poly import Poly

CALLS = ("E", "log", "numer", "denom")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


@dataclass(frozen=True)
class Node:
    pass


@dataclass(frozen=True)
class Num(Node):
    value: Fraction


@dataclass(frozen=True)
class Zeta(Node):
    n: int


@dataclass(frozen=True)
class Tau(Node):
    pass


@dataclass(frozen=True)
class Name(Node):
    name: str


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Negate(Node):
    arg: Node


@dataclass(frozen=True)
class Power(Node):
    base: Node
    exponent: int


@dataclass(frozen=True)
class Call(Node):
    fn: str
    arg: Node


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()·":
                raise ParseError(f"unexpected character {ch!r}", m.start(3))
            out.append(("op", "*" if ch == "·" else ch, m.start(3)))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Node:
        node = self.expr()
        self.take("end")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return Negate(self.unary())
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                sign = -1
            exp = int(self.take("int")[1])
            node = Power(node, sign * exp)
        return node

    def atom(self) -> Node:
        kind, text, pos = self.peek()
        if kind == "int":
            self.take()
            return Num(Fraction(int(text)))
        if kind == "op" and text == "(":
            self.take()
            node = self.expr()
            self.take("op", ")")
            return node
        if kind == "name":
            self.take()
            if text == "tau":
                return Tau()
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                if text == "z":
                    self.take()
                    n = int(self.take("int")[1])
                    if n < 1:
                        raise ParseError("z(n) needs n >= 1", pos)
                    self.take("op", ")")
                    return Zeta(n)
                if text not in CALLS:
                    raise ParseError(f"unknown function {text!r}", pos)
                self.take()
                arg = self.expr()
                self.take("op", ")")
                return Call(text, arg)
            return Name(text)
        raise ParseError(f"unexpected token {text or 'end of input'!r}", pos)


def parse_expr(src: str) -> Node:
    return _Parser(src).parse()


def render(node: Node, _prec: int = 0) -> str:
    """Inverse of :func:`parse_expr` up to redundant parentheses."""
    if isinstance(node, Num):
        v = node.value
        if v.denominator == 1 and v >= 0:
            return str(v.numerator)
        s = str(v)
        return f"({s})" if _prec > 0 else s
    if isinstance(node, Zeta):
        return f"z({node.n})"
    if isinstance(node, Tau):
        return "tau"
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Call):
        return f"{node.fn}({render(node.arg)})"
    if isinstance(node, Negate):
        s = "-" + render(node.arg, 3)
        return f"({s})" if _prec > 2 else s
    if isinstance(node, Power):
        return f"{render(node.base, 4)}^{node.exponent}"
    if isinstance(node, BinOp):
        prec = 1 if node.op in "+-" else 2
        s = f"{render(node.left, prec)} {node.op} {render(node.right, prec + 1)}"
        return f"({s})" if _prec > prec else s
    raise TypeError(node)


def names(node: Node) -> set[str]:
    if isinstance(node, Name):
        return {node.name}
    if isinstance(node, BinOp):
        return names(node.left) | names(node.right)
    if isinstance(node, (Negate, Call)):
        return names(node.arg)
    if isinstance(node, Power):
        return names(node.base)
    return set()


def substitute(node: Node, mapping: dict[str, Node]) -> Node:
    if isinstance(node, Name):
        return mapping.get(node.name, node)
    if isinstance(node, BinOp):
        return BinOp(node.op, substitute(node.left, mapping), substitute(node.right, mapping))
    if isinstance(node, Negate):
        return Negate(substitute(node.arg, mapping))
    if isinstance(node, Call):
        return Call(node.fn, substitute(node.arg, mapping))
    if isinstance(node, Power):
        return Power(substitute(node.base, mapping), node.exponent)
    return node


@dataclass
class Ops:
    """Carrier operations used by :func:`evaluate`."""

    const: Callable[[Fraction], object]
    zeta: Callable[[int], object]
    tau: Callable[[], object] | None = None
    call: Callable[[str, object], object] | None = None
    env: dict | None = None


def evaluate(node: Node, ops: Ops):
    if isinstance(node, Num):
        return ops.const(node.value)
    if isinstance(node, Zeta):
        return ops.zeta(node.n)
    if isinstance(node, Tau):
        if ops.tau is None:
            raise ValueError("tau is not available here")
        return ops.tau()
    if isinstance(node, Name):
        if ops.env is None or node.name not in ops.env:
            raise ValueError(f"unbound name {node.name!r}")
        return ops.env[node.name]
    if isinstance(node, Negate):
        return -evaluate(node.arg, ops)
    if isinstance(node, Power):
        return evaluate(node.base, ops) ** node.exponent
    if isinstance(node, Call):
        if ops.call is None:
            raise ValueError(f"{node.fn}() is not available here")
        return ops.call(node.fn, evaluate(node.arg, ops))
    if isinstance(node, BinOp):
        a, b = evaluate(node.left, ops), evaluate(node.right, ops)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    raise TypeError(node)


def parse_cyc_expr(src: str) -> CycNum:
    """Parse rationals, z(n), + - * / and integer powers into a CycNum."""
    node = parse_expr(src)
    try:
        return evaluate(node, Ops(const=CycNum.rational, zeta=zeta))
    except ZeroDivisionError as exc:
        raise ZeroDivisionError(f"division by zero in {src!r}") from exc


def parse_poly(src: str) -> Poly:
    """Univariate polynomial in x with rational coefficients."""
    node = parse_expr(src)
    for n in names(node):
        if n != "x":
            raise ParseError(f"unknown variable {n!r}", src.find(n))

    ops = Ops(const=lambda q: Poly([q]), zeta=_no_zeta, env={"x": Poly.x()})
    return _eval_poly(node, ops)


def _no_zeta(n: int):
    raise ValueError("z(n) is not allowed in a rational polynomial")


def _eval_poly(node: Node, ops: Ops) -> Poly:
    # division is only by constants; powers must be nonnegative
    if isinstance(node, BinOp) and node.op == "/":
        num, den = _eval_poly(node.left, ops), _eval_poly(node.right, ops)
        if den.degree != 0:
            raise ValueError("polynomial division must be by a nonzero constant")
        return num.scale(1 / den.lc)
    if isinstance(node, BinOp):
        a, b = _eval_poly(node.left, ops), _eval_poly(node.right, ops)
        return {"+": a + b, "-": a - b, "*": a * b}[node.op]
    if isinstance(node, Negate):
        return -_eval_poly(node.arg, ops)
    if isinstance(node, Power):
        if node.exponent < 0:
            raise ValueError("negative power in a polynomial")
        return _eval_poly(node.base, ops) ** node.exponent
    return evaluate(node, ops)
