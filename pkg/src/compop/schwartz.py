"""Rapidly decreasing test functions with certified tail majorants.

A :class:`SchwartzFn` is a complex multiple of a real function given piecewise
by closed-form expressions. Its decay class bounds

    sup_{|x| >= L} max_{j <= n} (1 + x^2)^n |f^(j)(x)|

which the seminorm estimator adds to its grid maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from .jets import Jet, LogJet, eval_jet, eval_logjet
from .symbols import X, SymbolExpr, const, exp

PI = math.pi
# outer jets are exactly zero for |y| beyond this radius in the gaussian class
_GAUSS_CUTOFF = 40.0


@dataclass(frozen=True)
class Decay:
    """Tail majorant of a test function.

    kind ``gaussian``: ``f = Q(x) exp(-rate x^2)`` with ``Q`` given by ``poly``
    (ascending float coefficients). kind ``bump``: support inside ``support``.
    kind ``rational``: user-declared ``|f^(j)(x)| <= constant (1+x^2)^(-power)``.
    """

    kind: str
    rate: float = 0.0
    poly: Tuple[float, ...] = (1.0,)
    support: Optional[Tuple[float, float]] = None
    power: float = 0.0
    constant: float = 1.0

    def radius(self) -> float:
        """Half-width outside which the function is negligible (or zero)."""
        if self.kind == "bump":
            return max(abs(self.support[0]), abs(self.support[1]))
        if self.kind == "gaussian":
            return math.sqrt(700.0 / self.rate) + 1.0
        if self.kind == "zero":
            return 0.0
        return math.inf

    def tail_bound(self, n: int, L: float) -> float:
        if self.kind == "zero":
            return 0.0
        if self.kind == "bump":
            lo, hi = self.support
            return 0.0 if -L <= lo and hi <= L else math.inf
        if self.kind == "rational":
            if self.power <= n:
                return math.inf
            return self.constant * (1 + L * L) ** (n - self.power)
        return _gaussian_tail(self.rate, self.poly, n, L)


def _gaussian_tail(rate, q, n, L):
    """Certified bound via ``f^(j) = P_j e^{-a x^2}``, ``P_{j+1} = P_j' - 2a x P_j``."""
    P = np.polynomial.Polynomial(q)
    xpoly = np.polynomial.Polynomial([0.0, 1.0])
    best = -math.inf
    L0 = max(L, 1.0)
    for _ in range(n + 1):
        c = np.abs(P.coef)
        S = float(c.sum()) * (1 + 1e-12)
        deg = len(c) - 1
        # |x| >= L0: (1+x^2)^n |P(x)| e^{-a x^2} <= S (1+1/L0^2)^n x^(2n+deg) e^{-a x^2}
        e = 2 * n + deg
        xs = max(L0, math.sqrt(e / (2 * rate)) if e > 0 else L0)
        lg = math.log(S) + n * math.log1p(1 / L0**2) + e * math.log(xs) - rate * xs * xs
        best = max(best, lg)
        if L < 1.0:
            best = max(best, math.log(S) + n * math.log(2.0))
        P = P.deriv() - 2 * rate * xpoly * P
    return math.exp(best) if best > -745 else 0.0


@dataclass(frozen=True)
class Piece:
    """``expr`` on the interval between ``lo`` and ``hi`` (open unless flagged)."""

    lo: float
    hi: float
    expr: SymbolExpr
    stiff: bool = False
    closed: bool = False

    def mask(self, y):
        if self.closed:
            return (y >= self.lo) & (y <= self.hi)
        return (y > self.lo) & (y < self.hi)


@dataclass(frozen=True)
class SchwartzFn:
    """``scale * f`` with ``f`` real, piecewise closed-form, zero off the pieces.

    Stiff pieces (bump-type ``exp(-1/t)`` factors) are differentiated in
    log-magnitude arithmetic so that underflow near the support edge is clean.
    """

    name: str
    pieces: Tuple[Piece, ...]
    decay: Decay
    scale: complex = 1.0
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def is_complex(self) -> bool:
        return isinstance(self.scale, complex) and self.scale.imag != 0

    def scaled(self, c) -> "SchwartzFn":
        return SchwartzFn(self.name, self.pieces, self.decay, self.scale * c, self.meta)

    def real_jet(self, y, k: int) -> np.ndarray:
        """Derivatives of the unscaled real function at ``y``: shape ``(k+1, *y.shape)``."""
        y = np.asarray(y, dtype=float)
        out = np.zeros((k + 1,) + y.shape)
        fin = np.isfinite(y)
        if self.decay.kind == "gaussian":
            fin &= np.abs(y) < _GAUSS_CUTOFF
        for piece in self.pieces:
            m = piece.mask(y) & fin
            if not np.any(m):
                continue
            pts = y[m]
            with np.errstate(all="ignore"):
                if piece.stiff:
                    d = eval_logjet(piece.expr, pts, k).derivs
                else:
                    d = eval_jet(piece.expr, pts, k).derivs
            out[:, m] = np.nan_to_num(d, nan=0.0, posinf=0.0, neginf=0.0)
        return out

    def jet(self, x, k: int) -> np.ndarray:
        d = self.real_jet(x, k)
        return d * self.scale if self.is_complex else d * float(np.real(self.scale))

    def __call__(self, x):
        v = self.jet(x, 0)[0]
        return v if np.ndim(v) else v.item()

    def compose_jet(self, inner) -> np.ndarray:
        """Derivatives of ``f∘g`` given the jet of ``g`` (a Jet or a LogJet)."""
        k = inner.order
        y = np.asarray(inner.value, dtype=float)
        F = self.real_jet(y, k)
        if inner.is_log:
            with np.errstate(all="ignore"):
                d = LogJet.from_jet(Jet(inner.x, F)).compose(inner).derivs
            d = np.nan_to_num(d, nan=0.0, posinf=0.0, neginf=0.0)
        else:
            with np.errstate(all="ignore"):
                d = Jet(inner.x, F).compose(inner).derivs
        return d * self.scale if self.is_complex else d * float(np.real(self.scale))

    def tail_bound(self, n: int, L: float) -> float:
        return abs(self.scale) * self.decay.tail_bound(n, L)

    def sup_abs(self, grid_points=None) -> float:
        if self.decay.kind == "zero":
            return 0.0
        xs = grid_points if grid_points is not None else np.linspace(-self.decay.radius(), self.decay.radius(), 20001)
        return float(np.max(np.abs(self.jet(xs, 0)[0])))

    def value_range(self, grid_points=None):
        """``(inf f, sup f)`` of the real part on a fine grid; zero is always attained."""
        r = min(self.decay.radius(), 1e3)
        xs = grid_points if grid_points is not None else np.linspace(-r, r, 200001)
        v = np.real(self.jet(xs, 0)[0])
        return min(float(v.min()), 0.0), max(float(v.max()), 0.0)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "decay": self.decay.kind,
            "scale": self.scale,
            "pieces": [
                {"lo": p.lo, "hi": p.hi, "expr": p.expr.text, "closed": p.closed} for p in self.pieces
            ],
        }


# --------------------------------------------------------------------------
# builtins

def _poly_expr(coeffs):
    """Expression ``sum c_i x^i`` from ascending coefficients."""
    expr = None
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        term = const(float(c)) if i == 0 else (X if i == 1 else X**i)
        if i and c != 1:
            term = float(c) * term
        expr = term if expr is None else expr + term
    return expr if expr is not None else const(0.0)


def hermite_coeffs(k: int):
    """Physicists' Hermite polynomial ``H_k`` (ascending integer coefficients)."""
    h0, h1 = [1], [0, 2]
    if k == 0:
        return h0
    for m in range(1, k):
        nxt = [0] * (m + 2)
        for i, c in enumerate(h1):
            nxt[i + 1] += 2 * c
        for i, c in enumerate(h0):
            nxt[i] -= 2 * m * c
        h0, h1 = h1, nxt
    return h1


def gaussian(scale=1.0) -> SchwartzFn:
    """``e^{-pi x^2}``, its own Fourier transform."""
    e = exp(-PI * X**2)
    return SchwartzFn("gaussian", (Piece(-math.inf, math.inf, e),), Decay("gaussian", rate=PI), scale)


def hermite(k: int) -> SchwartzFn:
    if k < 0:
        raise ValueError("hermite index must be non-negative")
    h = hermite_coeffs(k)
    e = _poly_expr(h) * exp(-PI * X**2) if k else exp(-PI * X**2)
    return SchwartzFn(
        f"hermite({k})",
        (Piece(-math.inf, math.inf, e),),
        Decay("gaussian", rate=PI, poly=tuple(float(c) for c in h)),
    )


def odd_gaussian() -> SchwartzFn:
    """``x e^{-pi x^2}``."""
    e = X * exp(-PI * X**2)
    return SchwartzFn("odd_gaussian", (Piece(-math.inf, math.inf, e),), Decay("gaussian", rate=PI, poly=(0.0, 1.0)))


def bump(a: float, b: float) -> SchwartzFn:
    """``e^{1 - 1/(1-t^2)}`` with ``t = (2x-a-b)/(b-a)``: value 1 at the midpoint, support ``[a, b]``."""
    if not a < b:
        raise ValueError("bump needs a < b")
    t = (2.0 * X - (a + b)) / (b - a)
    e = exp(1.0 - 1.0 / (1.0 - t**2))
    return SchwartzFn(f"bump({_num(a)},{_num(b)})", (Piece(a, b, e, stiff=True),), Decay("bump", support=(a, b)))


def smooth_step(t: SymbolExpr):
    """``h(t)/(h(t)+h(1-t))`` with ``h(t) = e^{-1/t}``: 0 for t<=0, 1 for t>=1.

    Returned as two closed forms, for ``t <= 1/2`` and ``t >= 1/2``. Each keeps
    only the exponential that is small on its half, so derivatives near the flat
    ends are not swamped by cancellation against the value 1.
    """
    g = 1.0 / t - 1.0 / (1.0 - t)
    lower = exp(-g) / (1.0 + exp(-g))
    upper = 1.0 / (1.0 + exp(g))
    return lower, upper


def plateau(inner: float, outer: float) -> SchwartzFn:
    """Even cutoff equal to 1 on ``[-inner, inner]`` and 0 outside ``(-outer, outer)``."""
    if not 0 < inner < outer:
        raise ValueError("plateau needs 0 < inner < outer")
    w = outer - inner
    mid = 0.5 * (inner + outer)
    r_lo, r_hi = smooth_step((outer - X) / w)
    l_lo, l_hi = smooth_step((outer + X) / w)
    # open pieces; the inner halves reach one ulp past the midpoint to cover it
    pieces = (
        Piece(-outer, -mid, l_lo, stiff=True),
        Piece(math.nextafter(-mid, -math.inf), -inner, l_hi, stiff=True),
        Piece(-inner, inner, const(1.0), closed=True),
        Piece(inner, math.nextafter(mid, math.inf), r_hi, stiff=True),
        Piece(mid, outer, r_lo, stiff=True),
    )
    return SchwartzFn(f"plateau({_num(inner)},{_num(outer)})", pieces, Decay("bump", support=(-outer, outer)))


def zero_fn() -> SchwartzFn:
    return SchwartzFn("zero", (), Decay("zero"))


def from_expr(expr: SymbolExpr, decay: Decay, name: Optional[str] = None, stiff: bool = False) -> SchwartzFn:
    """Wrap a user expression; the caller vouches for ``decay``."""
    lo, hi = decay.support if decay.support else (-math.inf, math.inf)
    return SchwartzFn(name or expr.text, (Piece(lo, hi, expr, stiff=stiff),), decay)


def _num(v):
    fr = Fraction(v).limit_denominator(1000)
    return str(fr) if float(fr) == v else repr(v)


def make_builtin(spec: str) -> SchwartzFn:
    """Build from a name: ``gaussian``, ``odd_gaussian``, ``zero``, ``bump:a:b``,
    ``plateau:inner:outer`` or ``hermite:k``."""
    parts = spec.strip().split(":")
    name, args = parts[0].lower(), parts[1:]
    try:
        if name == "gaussian" and not args:
            return gaussian()
        if name == "odd_gaussian" and not args:
            return odd_gaussian()
        if name == "zero" and not args:
            return zero_fn()
        if name == "bump" and len(args) == 2:
            return bump(float(Fraction(args[0])), float(Fraction(args[1])))
        if name == "plateau" and len(args) == 2:
            return plateau(float(Fraction(args[0])), float(Fraction(args[1])))
        if name == "hermite" and len(args) == 1:
            return hermite(int(args[0]))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad test function {spec!r}: {exc}") from exc
    raise ValueError(f"unknown test function {spec!r}")


def gaussian_fourier(omega):
    """Closed-form transform of the gaussian under ``f^(w) = int f(x) e^{-2 pi i x w} dx``."""
    return np.exp(-PI * np.asarray(omega, dtype=float) ** 2)
