"""Derivative jets and their arithmetic.

A :class:`Jet` stores the raw derivatives ``f(x), f'(x), ..., f^(k)(x)`` at one
point or at an array of points (vectorised along the trailing axes). Sums and
products use the Leibniz rule; composition uses the Faà di Bruno formula written
with partial Bell polynomials,

    (F∘g)^(n) = sum_m F^(m)(g) * B_{n,m}(g', g'', ...),
    B_{n,m} = sum_i C(n-1, i-1) g^(i) B_{n-i,m-1}.

Evaluating an expression with ``x`` bound to a jet of ``g`` therefore yields the
jet of the composition, which is how iterates are computed.

:class:`LogJet` carries the same data as ``sign * exp(log)`` so that iterates of
fast-growing symbols (``exp(x^2+1)``) stay representable past 1e308.
"""

from __future__ import annotations

import math
from math import comb

import numpy as np

from .errors import DomainError

DEFAULT_CAP = 1e300


def _first_x(mask, x):
    idx = np.flatnonzero(np.ravel(mask))
    if not idx.size:
        return None
    xs = np.broadcast_to(np.asarray(x, dtype=float), np.shape(mask)).ravel()
    return float(xs[idx[0]])


def _falling(p, m):
    out = 1.0
    for i in range(m):
        out *= p - i
    return out


def bell_table(g):
    """Partial Bell polynomials ``B[n][m]`` of the inner derivatives ``g``."""
    k = len(g) - 1
    zero = np.zeros_like(g[0])
    B = [[zero] * (k + 1) for _ in range(k + 1)]
    B[0][0] = np.ones_like(g[0])
    for n in range(1, k + 1):
        for m in range(1, n + 1):
            acc = zero
            for i in range(1, n - m + 2):
                acc = acc + comb(n - 1, i - 1) * g[i] * B[n - i][m - 1]
            B[n][m] = acc
    return B


class Jet:
    """Derivatives of order ``0..k`` at ``x``; ``derivs`` has shape ``(k+1, *x.shape)``."""

    __slots__ = ("x", "derivs")
    is_log = False

    def __init__(self, x, derivs):
        self.x = x
        self.derivs = np.asarray(derivs, dtype=float)

    def __repr__(self):
        return f"Jet(x={self.x!r}, derivs={self.derivs.tolist()!r})"

    @classmethod
    def variable(cls, x, k):
        x = np.asarray(x, dtype=float)
        d = np.zeros((k + 1,) + x.shape)
        d[0] = x
        if k >= 1:
            d[1] = 1.0
        return cls(x, d)

    @property
    def order(self):
        return self.derivs.shape[0] - 1

    @property
    def value(self):
        return self.derivs[0]

    def __len__(self):
        return self.derivs.shape[0]

    def __getitem__(self, j):
        return self.derivs[j]

    def tolist(self):
        return self.derivs.tolist()

    def constant(self, c):
        d = np.zeros_like(self.derivs)
        d[0] = c
        return Jet(self.x, d)

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return self.constant(float(other))

    def __add__(self, other):
        return Jet(self.x, self.derivs + self._coerce(other).derivs)

    __radd__ = __add__

    def __sub__(self, other):
        return Jet(self.x, self.derivs - self._coerce(other).derivs)

    def __rsub__(self, other):
        return Jet(self.x, self._coerce(other).derivs - self.derivs)

    def __neg__(self):
        return Jet(self.x, -self.derivs)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.x, self.derivs * float(other))
        a, b = self.derivs, other.derivs
        k = self.order
        out = np.zeros_like(a)
        for n in range(k + 1):
            for i in range(n + 1):
                out[n] += comb(n, i) * a[i] * b[n - i]
        return Jet(self.x, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def compose(self, inner: "Jet") -> "Jet":
        """Jet of ``F∘g`` where ``self`` holds ``F^(m)`` evaluated at ``g(x)``."""
        F, g = self.derivs, inner.derivs
        k = min(len(F), len(g)) - 1
        B = bell_table(g[: k + 1])
        out = np.zeros((k + 1,) + g.shape[1:])
        out[0] = F[0]
        for n in range(1, k + 1):
            for m in range(1, n + 1):
                out[n] += F[m] * B[n][m]
        return Jet(inner.x, out)

    def _apply(self, outer):
        return Jet(self.x, outer).compose(self)

    # elementary functions: outer derivative tables at u = self.value
    def powi(self, p: int):
        u = self.value
        if p < 0 and np.any(u == 0):
            raise DomainError("zero raised to a negative power", _first_x(u == 0, self.x))
        outer = np.zeros_like(self.derivs)
        for m in range(self.order + 1):
            c = _falling(p, m)
            if c != 0:
                outer[m] = c * u ** (p - m)
        return self._apply(outer)

    def reciprocal(self):
        if np.any(self.value == 0):
            raise DomainError("division by zero", _first_x(self.value == 0, self.x))
        return self.powi(-1)

    def sqrt(self):
        u = self.value
        if np.any(u < 0):
            raise DomainError("sqrt of a negative number", _first_x(u < 0, self.x))
        if self.order >= 1 and np.any(u == 0):
            raise DomainError("sqrt is not differentiable at 0", _first_x(u == 0, self.x))
        outer = np.empty_like(self.derivs)
        for m in range(self.order + 1):
            outer[m] = _falling(0.5, m) * u ** (0.5 - m)
        return self._apply(outer)

    def exp(self):
        e = np.exp(self.value)
        return self._apply(np.broadcast_to(e, self.derivs.shape).copy())

    def sin(self):
        s, c = np.sin(self.value), np.cos(self.value)
        cycle = (s, c, -s, -c)
        return self._apply(np.stack([cycle[m % 4] for m in range(self.order + 1)]))

    def cos(self):
        s, c = np.sin(self.value), np.cos(self.value)
        cycle = (c, -s, -c, s)
        return self._apply(np.stack([cycle[m % 4] for m in range(self.order + 1)]))

    def finite_below(self, cap):
        return bool(np.all(np.isfinite(self.derivs)) and np.all(np.abs(self.value) <= cap))


# --------------------------------------------------------------------------
# signed log-magnitude jets

def _lsum(signs, logs):
    """Signed log-sum-exp along axis 0. Returns (sign, log)."""
    signs = np.asarray(signs, dtype=float)
    logs = np.asarray(logs, dtype=float)
    with np.errstate(all="ignore"):
        active = signs != 0
        lg = np.where(active, logs, -np.inf)
        m = lg.max(axis=0)
        finite_m = np.isfinite(m)
        m0 = np.where(finite_m, m, 0.0)
        acc = np.where(active, signs * np.exp(lg - m0), 0.0).sum(axis=0)
        s = np.sign(acc)
        lout = np.where(acc != 0, np.log(np.abs(acc)) + m0, -np.inf)
        # every active term is beyond the float log range on the same side
        top = active & (lg == m)
        ssum = np.where(top, signs, 0.0).sum(axis=0)
        nt = top.sum(axis=0)
        same = np.abs(ssum) == nt
        inf_s = np.where(same, np.sign(ssum), np.nan)
        s = np.where(np.isposinf(m), inf_s, s)
        lout = np.where(np.isposinf(m), np.inf, lout)
        s = np.where(np.isneginf(m) & np.any(active, axis=0), np.sign(ssum), s)
        lout = np.where(np.isneginf(m), -np.inf, lout)
        s = np.where(np.isnan(m) | np.any(np.isnan(signs), axis=0), np.nan, s)
    return s, lout


def _lmul(sa, la, sb, lb):
    with np.errstate(all="ignore"):
        s = sa * sb
        ll = np.where(s == 0, -np.inf, la + lb)
        s = np.where(np.isnan(ll) & (s != 0), np.nan, s)
    return s, ll


class LogJet:
    """Jet whose entries are stored as ``sign * exp(log)``.

    ``sign`` is 0 for an exact zero, NaN where the value is unresolvable (for
    example ``sin`` of a number beyond float range). ``log = +inf`` marks a
    magnitude beyond even the log range.
    """

    __slots__ = ("x", "sign", "log")
    is_log = True

    def __init__(self, x, sign, log):
        self.x = x
        self.sign = np.asarray(sign, dtype=float)
        self.log = np.asarray(log, dtype=float)

    def __repr__(self):
        return f"LogJet(sign={self.sign.tolist()!r}, log={self.log.tolist()!r})"

    @classmethod
    def from_jet(cls, jet: Jet):
        d = jet.derivs
        with np.errstate(divide="ignore"):
            return cls(jet.x, np.sign(d), np.log(np.abs(d)))

    @classmethod
    def variable(cls, x, k):
        return cls.from_jet(Jet.variable(x, k))

    @property
    def order(self):
        return self.sign.shape[0] - 1

    @property
    def log_value(self):
        return self.log[0]

    @property
    def value_sign(self):
        return self.sign[0]

    @property
    def value(self):
        with np.errstate(over="ignore", invalid="ignore"):
            return self.sign[0] * np.exp(self.log[0])

    @property
    def derivs(self):
        with np.errstate(over="ignore", invalid="ignore"):
            return self.sign * np.exp(self.log)

    def resolved(self):
        """Mask of points whose value and derivatives are all determinate."""
        return np.all(~np.isnan(self.sign) & ~np.isnan(self.log), axis=0)

    def constant(self, c):
        s = np.zeros_like(self.sign)
        lg = np.full_like(self.log, -np.inf)
        if c != 0:
            s[0] = math.copysign(1.0, c)
            lg[0] = math.log(abs(c))
        return LogJet(self.x, s, lg)

    def _coerce(self, other):
        if isinstance(other, LogJet):
            return other
        if isinstance(other, Jet):
            return LogJet.from_jet(other)
        return self.constant(float(other))

    def __add__(self, other):
        o = self._coerce(other)
        s, lg = _lsum(np.stack([self.sign, o.sign]), np.stack([self.log, o.log]))
        return LogJet(self.x, s, lg)

    __radd__ = __add__

    def __neg__(self):
        return LogJet(self.x, -self.sign, self.log)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        k = self.order
        out_s = np.empty_like(self.sign)
        out_l = np.empty_like(self.log)
        for n in range(k + 1):
            ss, ls = [], []
            for i in range(n + 1):
                s, lg = _lmul(self.sign[i], self.log[i], o.sign[n - i], o.log[n - i])
                ss.append(s)
                ls.append(lg + math.log(comb(n, i)))
            out_s[n], out_l[n] = _lsum(np.stack(ss), np.stack(ls))
        return LogJet(self.x, out_s, out_l)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def compose(self, inner: "LogJet") -> "LogJet":
        """Faà di Bruno in log space; ``self`` holds outer derivatives at ``g(x)``."""
        k = min(self.order, inner.order)
        zs = np.zeros_like(inner.sign[0])
        zl = np.full_like(inner.log[0], -np.inf)
        Bs = [[zs] * (k + 1) for _ in range(k + 1)]
        Bl = [[zl] * (k + 1) for _ in range(k + 1)]
        Bs[0][0] = np.ones_like(zs)
        Bl[0][0] = np.zeros_like(zs)
        for n in range(1, k + 1):
            for m in range(1, n + 1):
                ss, ls = [], []
                for i in range(1, n - m + 2):
                    s, lg = _lmul(inner.sign[i], inner.log[i], Bs[n - i][m - 1], Bl[n - i][m - 1])
                    ss.append(s)
                    ls.append(lg + math.log(comb(n - 1, i - 1)))
                Bs[n][m], Bl[n][m] = _lsum(np.stack(ss), np.stack(ls))
        out_s = np.empty((k + 1,) + zs.shape)
        out_l = np.empty((k + 1,) + zs.shape)
        out_s[0], out_l[0] = self.sign[0], self.log[0]
        for n in range(1, k + 1):
            ss, ls = [], []
            for m in range(1, n + 1):
                s, lg = _lmul(self.sign[m], self.log[m], Bs[n][m], Bl[n][m])
                ss.append(s)
                ls.append(lg)
            out_s[n], out_l[n] = _lsum(np.stack(ss), np.stack(ls))
        return LogJet(inner.x, out_s, out_l)

    def _apply(self, outer_s, outer_l):
        return LogJet(self.x, outer_s, outer_l).compose(self)

    def powi(self, p: int):
        s0, l0 = self.sign[0], self.log[0]
        if p < 0 and np.any(s0 == 0):
            raise DomainError("zero raised to a negative power", _first_x(s0 == 0, self.x))
        k = self.order
        os_ = np.zeros_like(self.sign)
        ol = np.full_like(self.log, -np.inf)
        with np.errstate(all="ignore"):
            for m in range(k + 1):
                c = _falling(p, m)
                if c == 0:
                    continue
                e = p - m
                if e == 0:
                    os_[m] = math.copysign(1.0, c) * np.where(np.isnan(s0), np.nan, 1.0)
                    ol[m] = math.log(abs(c))
                    continue
                base = np.where(s0 == 0, 0.0, s0 ** e)
                os_[m] = math.copysign(1.0, c) * base
                ol[m] = np.where(s0 == 0, -np.inf, math.log(abs(c)) + e * l0)
        return self._apply(os_, ol)

    def reciprocal(self):
        return self.powi(-1)

    def sqrt(self):
        s0, l0 = self.sign[0], self.log[0]
        if np.any(s0 < 0):
            raise DomainError("sqrt of a negative number", _first_x(s0 < 0, self.x))
        if self.order >= 1 and np.any(s0 == 0):
            raise DomainError("sqrt is not differentiable at 0", _first_x(s0 == 0, self.x))
        os_ = np.empty_like(self.sign)
        ol = np.empty_like(self.log)
        with np.errstate(all="ignore"):
            for m in range(self.order + 1):
                c = _falling(0.5, m)
                os_[m] = math.copysign(1.0, c) * np.where(s0 == 0, 0.0, s0)
                ol[m] = np.where(s0 == 0, -np.inf, math.log(abs(c)) + (0.5 - m) * l0)
        return self._apply(os_, ol)

    def exp(self):
        with np.errstate(all="ignore"):
            u = np.where(self.sign[0] == 0, 0.0, self.sign[0] * np.exp(self.log[0]))
        s = np.where(np.isnan(u), np.nan, 1.0)
        os_ = np.broadcast_to(s, self.sign.shape).copy()
        ol = np.broadcast_to(u, self.log.shape).copy()
        return self._apply(os_, ol)

    def _trig(self, cycle_of):
        with np.errstate(all="ignore"):
            u = np.where(self.sign[0] == 0, 0.0, self.sign[0] * np.exp(self.log[0]))
            bad = ~np.isfinite(u)
            u0 = np.where(bad, 0.0, u)
            cyc = cycle_of(np.sin(u0), np.cos(u0))
            vals = np.stack([cyc[m % 4] for m in range(self.order + 1)])
            os_ = np.where(bad, np.nan, np.sign(vals))
            ol = np.log(np.abs(vals))
        return self._apply(os_, ol)

    def sin(self):
        return self._trig(lambda s, c: (s, c, -s, -c))

    def cos(self):
        return self._trig(lambda s, c: (c, -s, -c, s))


# --------------------------------------------------------------------------
# evaluation on jets

def walk(node, var):
    """Evaluate an expression node with ``x`` bound to the jet ``var``."""
    from . import symbols as S

    if isinstance(node, S.Var):
        return var
    if isinstance(node, S.Const):
        return var.constant(node.value)
    if isinstance(node, S.Add):
        return walk(node.left, var) + walk(node.right, var)
    if isinstance(node, S.Sub):
        return walk(node.left, var) - walk(node.right, var)
    if isinstance(node, S.Mul):
        return walk(node.left, var) * walk(node.right, var)
    if isinstance(node, S.Div):
        return walk(node.left, var) / walk(node.right, var)
    if isinstance(node, S.Neg):
        return -walk(node.arg, var)
    if isinstance(node, S.Pow):
        return walk(node.base, var).powi(node.exponent)
    if isinstance(node, S.Func):
        return getattr(walk(node.arg, var), node.name)()
    if isinstance(node, S.Compose):
        return walk(node.outer, walk(node.inner, var))
    raise TypeError(f"not an expression node: {node!r}")


def eval_jet(f, x, k: int) -> Jet:
    """Derivatives ``f(x), ..., f^(k)(x)`` (raw, not divided by ``j!``).

    ``x`` may be a float or an array; raises :class:`DomainError` outside the domain.

    >>> from compop.symbols import parse_symbol
    >>> eval_jet(parse_symbol("x^2"), 3.0, 2).tolist()
    [9.0, 6.0, 2.0]
    """
    if k < 0:
        raise ValueError("jet order must be non-negative")
    with np.errstate(over="ignore", invalid="ignore"):
        return walk(f.root, Jet.variable(x, k))


def eval_logjet(f, x, k: int) -> LogJet:
    return walk(f.root, LogJet.variable(x, k))


def compose_jets(outer: Jet, inner: Jet) -> Jet:
    """Faà di Bruno: jet of ``F∘g`` from ``F``'s jet at ``g(x)`` and ``g``'s jet at ``x``."""
    return outer.compose(inner)


def step(phi, jet, cap=DEFAULT_CAP):
    """One application of ``phi`` to the jet of ``g``: returns the jet of ``phi∘g``.

    Switches to :class:`LogJet` when the float result would exceed ``cap``.
    ``phi`` is a :class:`~compop.symbols.SymbolExpr` or any object exposing
    ``compose_jet(jet)``.
    """
    root = getattr(phi, "root", None)
    if root is None:
        return phi.compose_jet(jet)
    if not jet.is_log:
        with np.errstate(all="ignore"):
            nxt = walk(root, jet)
        if nxt.finite_below(cap):
            return nxt
        jet = LogJet.from_jet(jet)
    with np.errstate(all="ignore"):
        return walk(root, jet)


def iterate_eval(phi, n: int, x, k: int, cap: float = DEFAULT_CAP):
    """Jet of the ``n``-th iterate ``phi_n`` at ``x`` by ``n``-fold jet composition.

    Returns a :class:`Jet`, or a :class:`LogJet` (``.is_log``) as the overflow
    signal once any intermediate magnitude exceeds ``cap``.
    """
    if n < 0:
        raise ValueError("iteration count must be non-negative")
    jet = Jet.variable(x, k)
    for _ in range(n):
        jet = step(phi, jet, cap)
    return jet


def orbit_jets(phi, x, k: int, n: int, cap: float = DEFAULT_CAP):
    """Yield ``(m, jet of phi_m)`` for ``m = 1..n``."""
    jet = Jet.variable(x, k)
    for m in range(1, n + 1):
        jet = step(phi, jet, cap)
        yield m, jet
