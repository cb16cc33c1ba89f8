"""Exact rational polynomials, Sturm sequences and real-root isolation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import symbols as S

ISOLATION_WIDTH = Fraction(1, 2**32)


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        if not np.isfinite(c):
            raise ValueError("non-finite polynomial coefficient")
        return Fraction(*c.as_integer_ratio())
    return Fraction(c)


class Poly:
    """Polynomial with exact rational coefficients in ascending order.

    The zero polynomial has ``coeffs == ()`` and degree ``-1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls):
        return cls([0, 1])

    @classmethod
    def const(cls, c):
        return cls([c])

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _lift(self, other):
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return Poly([u + v for u, v in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if self.is_zero() or o.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out, base = Poly([1]), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(o.coeffs) + 1, 1)
        lc = o.lc
        while len(rem) >= len(o.coeffs) and rem:
            shift = len(rem) - len(o.coeffs)
            c = rem[-1] / lc
            q[shift] = c
            for i, b in enumerate(o.coeffs):
                rem[shift + i] -= c * b
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(q), Poly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self):
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self):
        return Poly([c / self.lc for c in self.coeffs]) if self.coeffs else self

    def compose(self, inner: "Poly") -> "Poly":
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def __call__(self, x):
        """Exact value at a rational, float value at floats or arrays."""
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = np.asarray(x, dtype=float)
        acc = np.zeros_like(x)
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc if acc.ndim else float(acc)

    def sign_at(self, x) -> int:
        """Sign at a rational or at ``±inf`` (given as float)."""
        if self.is_zero():
            return 0
        if isinstance(x, float) and np.isinf(x):
            s = 1 if self.lc > 0 else -1
            return s if (x > 0 or self.degree % 2 == 0) else -s
        v = self(_frac(x))
        return (v > 0) - (v < 0)

    def float_coeffs(self):
        return [float(c) for c in self.coeffs]


def gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def square_free_part(p: Poly) -> Poly:
    if p.degree <= 0:
        return p.monic()
    return (p // gcd(p, p.derivative())).monic()


def yun_decomposition(p: Poly):
    """Square-free factorization: list of ``(multiplicity, factor)`` with monic factors.

    ``p = lc * prod(factor ** multiplicity)``; factors are pairwise coprime.
    """
    if p.degree <= 0:
        return []
    dp = p.derivative()
    a = gcd(p, dp)
    b = p // a
    d = dp // a - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = gcd(b, d)
        if a.degree > 0:
            out.append((i, a))
        b = b // a
        d = d // a - b.derivative()
        i += 1
    return out


def sturm_sequence(p: Poly):
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(Poly([c / abs(r.lc) for c in r.coeffs]))
    if seq[-1].is_zero():
        seq.pop()
    return seq


def _variations(seq, x) -> int:
    signs = [s for s in (q.sign_at(x) for q in seq) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def sturm_root_count(p: Poly, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``, exactly.

    ``lo``/``hi`` may be rationals or ``±inf`` floats. Works on the square-free
    part, so repeated roots count once.

    >>> sturm_root_count(Poly([-2, 0, 1]), 0, 2)
    1
    """
    if not _lt(lo, hi):
        raise ValueError("need lo < hi")
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    q = square_free_part(p)
    if q.degree <= 0:
        return 0
    seq = sturm_sequence(q)
    return _variations(seq, _norm(lo)) - _variations(seq, _norm(hi))


def _norm(x):
    if isinstance(x, float) and np.isinf(x):
        return x
    return _frac(x)


def _lt(a, b):
    return float(a) < float(b) if (isinstance(a, float) or isinstance(b, float)) else a < b


def cauchy_bound(p: Poly) -> Fraction:
    """All real roots lie in ``(-B, B)``."""
    if p.degree <= 0:
        return Fraction(1)
    return 1 + max(abs(c / p.lc) for c in p.coeffs[:-1])


@dataclass(frozen=True)
class RootInterval:
    """``(lo, hi]`` containing exactly one distinct real root."""

    lo: Fraction
    hi: Fraction
    multiplicity_hint: int = 1
    approx: Optional[float] = None

    @property
    def midpoint(self) -> float:
        return float((self.lo + self.hi) / 2)

    @property
    def estimate(self) -> float:
        return self.approx if self.approx is not None else self.midpoint

    def contains(self, x) -> bool:
        return self.lo < _frac(x) <= self.hi


def isolate_real_roots(p: Poly, width: Fraction = ISOLATION_WIDTH):
    """Isolating intervals (sorted) for all distinct real roots of ``p``."""
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    q = square_free_part(p)
    if q.degree <= 0:
        return []
    seq = sturm_sequence(q)
    B = cauchy_bound(q)
    # power-of-two bound keeps midpoints dyadic
    b = Fraction(1)
    while b < B:
        b *= 2
    out = []
    stack = [(-b, b, _variations(seq, -b), _variations(seq, b))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        n = vlo - vhi
        if n == 0:
            continue
        if n == 1 and hi - lo <= width:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        vm = _variations(seq, mid)
        stack.append((mid, hi, vm, vhi))
        stack.append((lo, mid, vlo, vm))
    out.sort()
    factors = yun_decomposition(p)
    result = []
    for lo, hi in out:
        mult = 1
        for m, f in factors:
            if f.degree > 0 and sturm_root_count(f, lo, hi) == 1:
                mult = m
                break
        approx = float(hi) if q(hi) == 0 else None
        result.append(RootInterval(lo, hi, mult, approx))
    return result


def fixed_points(phi: Poly):
    """Isolating intervals for the distinct real solutions of ``phi(x) = x``.

    Tangential (even multiplicity) fixed points are included, with
    ``multiplicity_hint >= 2``. Raises ``ValueError`` for the identity.
    """
    q = phi - Poly.x()
    if q.is_zero():
        raise ValueError("every point is a fixed point of the identity")
    return isolate_real_roots(q)


def poly_from_expr(e) -> Optional[Poly]:
    """Exact coefficients of ``e`` if it is a polynomial expression, else ``None``.

    Division is accepted only by a nonzero constant.
    """
    return _to_poly(S.as_expr(e).root)


def _to_poly(node) -> Optional[Poly]:
    if isinstance(node, S.Var):
        return Poly.x()
    if isinstance(node, S.Const):
        return Poly([node.value])
    if isinstance(node, S.Neg):
        a = _to_poly(node.arg)
        return None if a is None else -a
    if isinstance(node, S.Pow):
        a = _to_poly(node.base)
        if a is None:
            return None
        if node.exponent < 0:
            if a.degree == 0:
                return Poly([a.coeffs[0] ** node.exponent])
            return None
        return a ** node.exponent
    if isinstance(node, S.Compose):
        outer, inner = _to_poly(node.outer), _to_poly(node.inner)
        if outer is None or inner is None:
            return None
        return outer.compose(inner)
    if isinstance(node, (S.Add, S.Sub, S.Mul, S.Div)):
        a, b = _to_poly(node.left), _to_poly(node.right)
        if a is None or b is None:
            return None
        if isinstance(node, S.Add):
            return a + b
        if isinstance(node, S.Sub):
            return a - b
        if isinstance(node, S.Mul):
            return a * b
        if b.degree != 0:
            return None
        return a * Poly([1 / b.coeffs[0]])
    return None
