"""Scalar expression language for user-supplied psi maps and composite maps.

Grammar (see docs/grammar.md)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | "+" unary | power ;
    power   = atom [ "^" unary ] ;
    atom    = number | ident [ "(" expr { "," expr } ")" ] | "(" expr ")" ;

``^`` is right associative and binds tighter than unary minus, so ``-x^2``
is ``-(x^2)`` and ``2^-1`` is ``0.5``.
"""
from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Union

from .errors import (
    ArityError,
    EvalDomainError,
    ExpressionSyntaxError,
    MissingBinding,
    UnknownIdentifier,
)

FUNCTIONS = {"ln": 1, "exp": 1, "sqrt": 1, "abs": 1, "sign": 1, "min": 2, "max": 2}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


Node = Union[Num, Var, Neg, BinOp, Call]


@dataclass(frozen=True)
class Expression:
    """Parsed expression tree together with its free variables."""

    root: Node
    free_variables: frozenset
    source: str = ""

    def __call__(self, **bindings: float) -> float:
        return evaluate(self, bindings)

    def calls(self) -> frozenset:
        return frozenset(_walk_calls(self.root))

    def __str__(self) -> str:
        return to_source(self.root)


# -- tokenizer -------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),])"
    r")"
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    offset: int


def _byte_offset(src: str, i: int) -> int:
    return len(src[:i].encode("utf-8"))


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise ExpressionSyntaxError(f"unexpected character {src[pos]!r}", _byte_offset(src, pos))
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), _byte_offset(src, m.start(kind))))
        pos = m.end()
    toks.append(_Tok("end", "", _byte_offset(src, len(src))))
    return toks


class _Parser:
    def __init__(self, src: str, variables: frozenset | None):
        self.toks = _tokenize(src)
        self.i = 0
        self.variables = variables
        self.free: set[str] = set()

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text or self.tok.kind == "end":
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise ExpressionSyntaxError(f"expected {text!r}, found {found}", self.tok.offset)
        return self.take()

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.take().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = self.take().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.take()
            return Neg(self.unary())
        if self.tok.kind == "op" and self.tok.text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Node:
        tok = self.tok
        if tok.kind == "num":
            self.take()
            return Num(float(tok.text))
        if tok.kind == "ident":
            self.take()
            if self.tok.kind == "op" and self.tok.text == "(":
                return self.call(tok)
            if tok.text in FUNCTIONS:
                raise ArityError(f"function {tok.text!r} at offset {tok.offset} needs arguments")
            if self.variables is not None and tok.text not in self.variables:
                raise UnknownIdentifier(tok.text, tok.offset)
            self.free.add(tok.text)
            return Var(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExpressionSyntaxError(f"expected an operand, found {found}", tok.offset)

    def call(self, name: _Tok) -> Node:
        if name.text not in FUNCTIONS:
            raise UnknownIdentifier(name.text, name.offset)
        self.expect("(")
        args = [self.expr()]
        while self.tok.kind == "op" and self.tok.text == ",":
            self.take()
            args.append(self.expr())
        self.expect(")")
        want = FUNCTIONS[name.text]
        if len(args) != want:
            raise ArityError(f"{name.text} takes {want} argument(s), got {len(args)} (offset {name.offset})")
        return Call(name.text, tuple(args))


def parse(src: str, variables: Iterable[str] | None = None) -> Expression:
    """Parse ``src``; when ``variables`` is given, any other identifier is rejected."""
    allowed = None if variables is None else frozenset(variables)
    p = _Parser(src, allowed)
    root = p.parse()
    return Expression(root, frozenset(p.free), src)


# -- printing ----------------------------------------------------------------

def to_source(node: Node) -> str:
    """Fully parenthesized source text that parses back to ``node``."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    return f"{node.func}({', '.join(to_source(a) for a in node.args)})"


def _walk_calls(node: Node):
    if isinstance(node, Call):
        yield node.func
        for a in node.args:
            yield from _walk_calls(a)
    elif isinstance(node, Neg):
        yield from _walk_calls(node.operand)
    elif isinstance(node, BinOp):
        yield from _walk_calls(node.left)
        yield from _walk_calls(node.right)


# -- evaluation ----------------------------------------------------------------

def _finite(v: float, node: Node, arg) -> float:
    if not math.isfinite(v):
        raise EvalDomainError(to_source(node), arg, "non-finite result")
    return v


def _ln(v, node):
    if v <= 0:
        raise EvalDomainError(to_source(node), v, "logarithm of a nonpositive number")
    return math.log(v)


def _sqrt(v, node):
    if v < 0:
        raise EvalDomainError(to_source(node), v, "square root of a negative number")
    return math.sqrt(v)


def _exp(v, node):
    try:
        return math.exp(v)
    except OverflowError:
        raise EvalDomainError(to_source(node), v, "exponential overflow") from None


def _sign(v, node):
    return (v > 0) - (v < 0) + 0.0


_UNARY = {
    "ln": _ln,
    "sqrt": _sqrt,
    "exp": _exp,
    "abs": lambda v, node: abs(v),
    "sign": _sign,
}


def _power(a: float, b: float, node: Node) -> float:
    if a == 0.0 and b < 0:
        raise EvalDomainError(to_source(node), (a, b), "zero raised to a negative power")
    if a < 0.0 and b != math.floor(b):
        raise EvalDomainError(to_source(node), (a, b), "negative base with non-integer exponent")
    try:
        return math.pow(a, b)
    except OverflowError:
        raise EvalDomainError(to_source(node), (a, b), "power overflow") from None


@functools.lru_cache(maxsize=4096)
def _compile(node: Node) -> Callable[[Mapping[str, float]], float]:
    if isinstance(node, Num):
        v = node.value
        return lambda env: v
    if isinstance(node, Var):
        name = node.name

        def var(env):
            try:
                return env[name]
            except KeyError:
                raise MissingBinding(f"no value bound for {name!r}") from None
        return var
    if isinstance(node, Neg):
        inner = _compile(node.operand)
        return lambda env: -inner(env)
    if isinstance(node, BinOp):
        lf, rf, op = _compile(node.left), _compile(node.right), node.op
        if op == "+":
            return lambda env: _finite(lf(env) + rf(env), node, None)
        if op == "-":
            return lambda env: _finite(lf(env) - rf(env), node, None)
        if op == "*":
            return lambda env: _finite(lf(env) * rf(env), node, None)
        if op == "/":
            def div(env):
                d = rf(env)
                if d == 0.0:
                    raise EvalDomainError(to_source(node), d, "division by zero")
                return _finite(lf(env) / d, node, d)
            return div
        return lambda env: _finite(_power(lf(env), rf(env), node), node, None)
    if node.func in _UNARY:
        fn, arg = _UNARY[node.func], _compile(node.args[0])
        return lambda env: fn(arg(env), node)
    a0, a1 = _compile(node.args[0]), _compile(node.args[1])
    pick = min if node.func == "min" else max
    return lambda env: pick(a0(env), a1(env))


def evaluate(expr: Expression | Node, bindings: Mapping[str, float]) -> float:
    """Evaluate ``expr`` with the given variable bindings.

    Raises :class:`MissingBinding` when a free variable is unbound and
    :class:`EvalDomainError` when any node leaves its domain.
    """
    if isinstance(expr, Expression):
        missing = expr.free_variables - set(bindings)
        if missing:
            raise MissingBinding(f"no value bound for {sorted(missing)}")
        root = expr.root
    else:
        root = expr
    return float(_compile(root)({k: float(v) for k, v in bindings.items()}))


def compile_expression(expr: Expression, argnames: tuple[str, ...]) -> Callable[..., float]:
    """Positional fast path: ``compile_expression(e, ("x", "t"))(3.0, 1.0)``."""
    extra = expr.free_variables - set(argnames)
    if extra:
        raise UnknownIdentifier(sorted(extra)[0])
    fn = _compile(expr.root)

    def call(*args: float) -> float:
        return fn(dict(zip(argnames, args)))
    return call
