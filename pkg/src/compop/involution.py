"""Decreasing involutions defined implicitly by ``x + y = f(x - y)`` for even ``f``.

With ``u = y - x`` and ``f`` even the relation reads ``f(u) - u = 2x``. When
``|f'| <= a < 1`` the left side is strictly decreasing in ``u``, so ``u`` is
unique; ``phi(x) = x + u`` then satisfies ``phi(phi(x)) = x`` and
``-2/(1-a) < phi'(x) < 0``.
"""

from __future__ import annotations

import numpy as np

from .errors import PreconditionError
from .grid import GridSpec
from .jets import Jet, bell_table, eval_jet
from .symbols import SymbolExpr, as_expr

EVEN_TOL = 1e-12
CHECK_GRID = GridSpec(L=50.0, N=4001)


class InvolutionSymbol:
    """The symbol ``y = phi(x)`` solving ``x + y = f(x - y)``.

    Behaves like a :class:`~compop.symbols.SymbolExpr` for evaluation, jets and
    iteration (``__call__``, ``jet``, ``compose_jet``, ``text``).
    """

    def __init__(self, f, probe: GridSpec = CHECK_GRID, a: float = None):
        self.f = as_expr(f)
        xs = probe.points()
        with np.errstate(all="ignore"):
            fx, fm = np.asarray(self.f(xs)), np.asarray(self.f(-xs))
        if not np.all(np.abs(fx - fm) <= EVEN_TOL):
            bad = xs[np.argmax(np.abs(fx - fm))]
            raise PreconditionError(f"f is not even (f(x) != f(-x) at x={bad:g})", "f is even")
        slope = np.abs(eval_jet(self.f, xs, 1).derivs[1])
        est = float(slope.max())
        self.a = est if a is None else float(a)
        if not self.a < 1:
            raise PreconditionError(f"sup|f'| is about {est:.6g}, not below 1", "sup|f'| <= a < 1")
        self.f0 = float(self.f(0.0))

    @property
    def text(self) -> str:
        return f"involution[{self.f.text}]"

    def __repr__(self):
        return f"InvolutionSymbol({self.f.text!r}, a={self.a:.6g})"

    def solve_u(self, x):
        """The unique ``u`` with ``f(u) - u = 2x`` (bisection, then Newton polish)."""
        x = np.asarray(x, dtype=float)
        U = (abs(self.f0) + 2 * np.abs(x)) / (1 - self.a) + 1.0
        lo, hi = -U, U.copy()
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            g = np.asarray(self.f(mid)) - mid - 2 * x
            lo = np.where(g > 0, mid, lo)
            hi = np.where(g > 0, hi, mid)
            if np.all(hi - lo <= 4 * np.spacing(np.maximum(np.abs(lo), np.abs(hi)) + 1.0)):
                break
        u = 0.5 * (lo + hi)
        if not np.all(np.isfinite(u)):
            raise PreconditionError("root bracketing failed", "f(u) - u = 2x has a bracketed root")
        for _ in range(2):
            jet = eval_jet(self.f, u, 1).derivs
            g = jet[0] - u - 2 * x
            u = u - g / (jet[1] - 1.0)
        return u

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        y = x + self.solve_u(x)
        return y if y.ndim else float(y)

    def jet(self, x, k: int) -> Jet:
        """Derivatives of ``phi`` by order-by-order implicit differentiation."""
        x = np.asarray(x, dtype=float)
        u = self.solve_u(x)
        fj = eval_jet(self.f, u, k).derivs
        G = fj.copy()
        G[0] = G[0] - u
        if k >= 1:
            G[1] = G[1] - 1.0
        ud = np.zeros((k + 1,) + x.shape)
        ud[0] = u
        for n in range(1, k + 1):
            B = bell_table(ud[: n + 1])
            rest = sum((G[m] * B[n][m] for m in range(2, n + 1)), np.zeros_like(u))
            ud[n] = ((2.0 if n == 1 else 0.0) - rest) / G[1]
        ud[0] = u + x
        if k >= 1:
            ud[1] = ud[1] + 1.0
        return Jet(x, ud)

    def compose_jet(self, inner):
        if inner.is_log:
            inner = Jet(inner.x, inner.derivs)
        return Jet(inner.x, self.jet(inner.value, inner.order).derivs).compose(inner)


def involution_from_even(f, x=None, probe: GridSpec = CHECK_GRID):
    """Build the involution for an even ``f`` with ``sup|f'| < 1``.

    Returns the symbol object, or its values at ``x`` when ``x`` is given.
    """
    phi = InvolutionSymbol(f, probe)
    return phi if x is None else phi(x)


def is_symbol_like(obj) -> bool:
    return isinstance(obj, (SymbolExpr, InvolutionSymbol))
