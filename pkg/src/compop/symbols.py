"""Closed-form symbol expressions: AST, parser, printer and evaluation.

Grammar (EBNF)::

    expr     = term , { ("+" | "-") , term } ;
    term     = unary , { ("*" | "/") , unary } ;
    unary    = ("+" | "-") , unary | power ;
    power    = atom , [ "^" , integer ] ;
    integer  = [ "-" | "+" ] , digit , { digit } ;
    atom     = number | "x" | func , "(" , expr , ")" | "(" , expr , ")" ;
    func     = "sqrt" | "exp" | "cos" | "sin" ;
    number   = digits , [ "." , [ digits ] ] , [ exponent ]
             | "." , digits , [ exponent ] ;
    exponent = ("e" | "E") , [ "+" | "-" ] , digits ;

``-x^2`` parses as ``-(x^2)``; exponents must be integer literals.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DomainError, ParseError

FUNCTIONS = ("sqrt", "exp", "cos", "sin")


class Node:
    """Base class of expression nodes. Nodes are immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Node):
    pass


@dataclass(frozen=True)
class Const(Node):
    value: float


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Div(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Neg(Node):
    arg: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int


@dataclass(frozen=True)
class Func(Node):
    name: str
    arg: Node


@dataclass(frozen=True)
class Compose(Node):
    """``outer`` evaluated at ``inner``; ``name`` is a display label only."""

    outer: Node
    inner: Node
    name: Optional[str] = None


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, self.text, tok[2])

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            found = tok[1] or "end of input"
            raise self.error(f"expected {value!r}, found {found!r}", tok)
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise self.error(f"unexpected token {tok[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            arg = self.unary()
            return arg if tok[1] == "+" else Neg(arg)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            tok = self.peek()
            if tok[1] in ("+", "-"):
                self.take()
                sign = -1 if tok[1] == "-" else 1
                tok = self.peek()
            if tok[0] != "num":
                raise self.error("exponent must be an integer literal", tok)
            if not tok[1].isdigit():
                raise self.error(f"non-integer exponent {tok[1]!r}", tok)
            self.take()
            if self.peek()[1] == "^":
                raise self.error("chained exponents are not supported; use parentheses")
            return Pow(base, sign * int(tok[1]))
        return base

    def atom(self):
        tok = self.take()
        kind, value, _ = tok
        if kind == "num":
            return Const(float(value))
        if kind == "name":
            if value == "x":
                return Var()
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Func(value, arg)
            raise self.error(f"unknown identifier {value!r}", tok)
        if value == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = value or "end of input"
        raise self.error(f"unexpected token {found!r}", tok)


# --------------------------------------------------------------------------
# printing

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _prec(node):
    if isinstance(node, Const) and node.value < 0:
        return 3
    return _PREC.get(type(node), 5)


def _fmt_const(v):
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def to_text(node: Node) -> str:
    """Render a node in the input grammar (minimal parentheses)."""
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Const):
        return _fmt_const(node.value)
    if isinstance(node, (Add, Sub, Mul, Div)):
        p = _prec(node)
        op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(node)]
        lhs = to_text(node.left)
        if _prec(node.left) < p:
            lhs = f"({lhs})"
        rhs = to_text(node.right)
        # left-associative grammar: a right operand of equal precedence keeps
        # its parentheses so that parse(to_text(n)) == n structurally
        if _prec(node.right) <= p or (isinstance(node.right, Const) and node.right.value < 0):
            rhs = f"({rhs})"
        return f"{lhs}{op}{rhs}"
    if isinstance(node, Neg):
        arg = to_text(node.arg)
        if _prec(node.arg) < 3 or (isinstance(node.arg, Const) and node.arg.value < 0):
            arg = f"({arg})"
        return f"-{arg}"
    if isinstance(node, Pow):
        base = to_text(node.base)
        if _prec(node.base) < 5:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, Func):
        return f"{node.name}({to_text(node.arg)})"
    if isinstance(node, Compose):
        return to_text(substitute(node.outer, node.inner))
    raise TypeError(f"not an expression node: {node!r}")


def substitute(node: Node, inner: Node) -> Node:
    """Replace every occurrence of ``x`` in ``node`` by ``inner``."""
    if isinstance(node, Var):
        return inner
    if isinstance(node, Const):
        return node
    if isinstance(node, (Add, Sub, Mul, Div)):
        return type(node)(substitute(node.left, inner), substitute(node.right, inner))
    if isinstance(node, Neg):
        return Neg(substitute(node.arg, inner))
    if isinstance(node, Pow):
        return Pow(substitute(node.base, inner), node.exponent)
    if isinstance(node, Func):
        return Func(node.name, substitute(node.arg, inner))
    if isinstance(node, Compose):
        return Compose(node.outer, substitute(node.inner, inner), node.name)
    raise TypeError(f"not an expression node: {node!r}")


# --------------------------------------------------------------------------
# evaluation

def _first_bad(mask, x):
    idx = np.flatnonzero(np.ravel(mask))
    xs = np.broadcast_to(x, np.shape(mask)).ravel()
    return float(xs[idx[0]]) if idx.size else None


def _eval(node, x, x0):
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return np.full_like(x, node.value)
    if isinstance(node, Add):
        return _eval(node.left, x, x0) + _eval(node.right, x, x0)
    if isinstance(node, Sub):
        return _eval(node.left, x, x0) - _eval(node.right, x, x0)
    if isinstance(node, Mul):
        return _eval(node.left, x, x0) * _eval(node.right, x, x0)
    if isinstance(node, Div):
        den = _eval(node.right, x, x0)
        bad = den == 0
        if np.any(bad):
            raise DomainError("division by zero", _first_bad(bad, x0))
        return _eval(node.left, x, x0) / den
    if isinstance(node, Neg):
        return -_eval(node.arg, x, x0)
    if isinstance(node, Pow):
        b = _eval(node.base, x, x0)
        if node.exponent < 0:
            bad = b == 0
            if np.any(bad):
                raise DomainError("zero raised to a negative power", _first_bad(bad, x0))
        return b ** node.exponent
    if isinstance(node, Func):
        u = _eval(node.arg, x, x0)
        if node.name == "sqrt":
            bad = u < 0
            if np.any(bad):
                raise DomainError("sqrt of a negative number", _first_bad(bad, x0))
            return np.sqrt(u)
        return getattr(np, node.name)(u)
    if isinstance(node, Compose):
        return _eval(node.outer, _eval(node.inner, x, x0), x0)
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node: Node, x):
    """Vectorised float evaluation; raises :class:`DomainError` instead of NaN."""
    arr = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        out = _eval(node, arr, arr)
    return out if np.ndim(x) else float(out)


# --------------------------------------------------------------------------
# public wrapper

Operand = Union["SymbolExpr", float, int]


@dataclass(frozen=True)
class SymbolExpr:
    """A closed-form real function of ``x``.

    Supports arithmetic with other expressions and numbers, calling on floats or
    arrays, and composition ``f.compose(g) == f∘g``.
    """

    root: Node

    @property
    def text(self) -> str:
        return to_text(self.root)

    def __str__(self):
        return self.text

    def __call__(self, x):
        return evaluate(self.root, x)

    def jet(self, x, k):
        from .jets import eval_jet

        return eval_jet(self, x, k)

    def compose_jet(self, jet):
        """Jet of ``self∘g`` given the jet of ``g`` (float or log-magnitude)."""
        from .jets import walk

        return walk(self.root, jet)

    def compose(self, inner: "SymbolExpr", name: Optional[str] = None) -> "SymbolExpr":
        return compose(self, inner, name)

    # arithmetic builders
    def _wrap(self, other):
        if isinstance(other, SymbolExpr):
            return other.root
        if isinstance(other, (int, float)):
            return Const(float(other))
        return NotImplemented

    def __add__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is NotImplemented else SymbolExpr(Add(self.root, o))

    def __radd__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is NotImplemented else SymbolExpr(Add(o, self.root))

    def __sub__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is NotImplemented else SymbolExpr(Sub(self.root, o))

    def __rsub__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is NotImplemented else SymbolExpr(Sub(o, self.root))

    def __mul__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is NotImplemented else SymbolExpr(Mul(self.root, o))

    def __rmul__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is NotImplemented else SymbolExpr(Mul(o, self.root))

    def __truediv__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is NotImplemented else SymbolExpr(Div(self.root, o))

    def __rtruediv__(self, other):
        o = self._wrap(other)
        return NotImplemented if o is NotImplemented else SymbolExpr(Div(o, self.root))

    def __neg__(self):
        return SymbolExpr(Neg(self.root))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        return SymbolExpr(Pow(self.root, n))


def parse_symbol(text: str) -> SymbolExpr:
    """Parse ``text`` into a :class:`SymbolExpr`.

    >>> parse_symbol("sqrt(x^2+1)").text
    'sqrt(x^2+1)'
    """
    return SymbolExpr(_Parser(text).parse())


def compose(f: SymbolExpr, g: SymbolExpr, name: Optional[str] = None) -> SymbolExpr:
    """The expression ``f∘g``, kept as a composition node (no expansion)."""
    return SymbolExpr(Compose(f.root, g.root, name))


X = SymbolExpr(Var())


def const(c: float) -> SymbolExpr:
    return SymbolExpr(Const(float(c)))


def sqrt(e: SymbolExpr) -> SymbolExpr:
    return SymbolExpr(Func("sqrt", e.root))


def exp(e: SymbolExpr) -> SymbolExpr:
    return SymbolExpr(Func("exp", e.root))


def cos(e: SymbolExpr) -> SymbolExpr:
    return SymbolExpr(Func("cos", e.root))


def sin(e: SymbolExpr) -> SymbolExpr:
    return SymbolExpr(Func("sin", e.root))


def as_expr(obj) -> SymbolExpr:
    if isinstance(obj, SymbolExpr):
        return obj
    if isinstance(obj, str):
        return parse_symbol(obj)
    if isinstance(obj, Node):
        return SymbolExpr(obj)
    raise TypeError(f"cannot interpret {obj!r} as a symbol expression")


# --------------------------------------------------------------------------
# small structural helpers

def _terms(node, sign, out):
    if isinstance(node, Add):
        _terms(node.left, sign, out)
        _terms(node.right, sign, out)
    elif isinstance(node, Sub):
        _terms(node.left, sign, out)
        _terms(node.right, -sign, out)
    elif isinstance(node, Neg):
        _terms(node.arg, -sign, out)
    else:
        out.append((sign, node))


def minus_identity(e: SymbolExpr) -> SymbolExpr:
    """``e(x) - x`` with a literal ``+x`` term cancelled structurally.

    Avoids the catastrophic cancellation of evaluating ``(x + g(x)) - x`` in
    floating point when ``g`` is tiny.
    """
    terms = []
    _terms(e.root, 1, terms)
    for i, (s, n) in enumerate(terms):
        if s == 1 and isinstance(n, Var):
            del terms[i]
            break
    else:
        terms.append((-1, Var()))
    if not terms:
        return const(0.0)
    s0, n0 = terms[0]
    node = n0 if s0 == 1 else Neg(n0)
    for s, n in terms[1:]:
        node = Add(node, n) if s == 1 else Sub(node, n)
    return SymbolExpr(node)


def math_value(e: SymbolExpr, x: float) -> float:
    """Scalar evaluation with Python floats (no numpy); used in root finders."""
    v = evaluate(e.root, x)
    if not math.isfinite(v):
        raise OverflowError(f"non-finite value at x={x!r}")
    return v
