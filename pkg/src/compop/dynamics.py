"""Orbits of test functions under composition: seminorms, profiles, Cesàro means.

Everything here works on jets. The jet of ``f∘phi_k`` at a batch of points is
obtained by pushing the identity jet through ``k`` applications of ``phi`` and
then composing with the derivatives of ``f``.

The seminorm index includes ``j = 0``:

    pi_n(f) = sup_x max_{0 <= j <= n} (1 + x^2)^n |f^(j)(x)|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import PreconditionError
from .grid import DEFAULT_GRID, GridSpec
from .jets import DEFAULT_CAP, Jet, LogJet, eval_logjet, step
from .monotone import Monotonicity, monotonicity_classify
from .poly import fixed_points, poly_from_expr
from .schwartz import SchwartzFn
from .symbols import minus_identity

ZOOM_POINTS = 17
ZOOM_FACTOR = 8
CANDIDATES = 8
OUTER_REACH = 1e4
OUTER_POINTS = 2048
MAX_EXTRA_POINTS = 400_000


@dataclass
class SeminormEstimate:
    n: int
    value: float
    argmax_x: float
    argmax_j: int
    tail_bound: float
    grid_value: float = 0.0
    certified_tail: bool = True

    def to_dict(self):
        return {
            "n": self.n,
            "value": self.value,
            "argmax_x": self.argmax_x,
            "argmax_j": self.argmax_j,
            "tail_bound": self.tail_bound,
            "grid_value": self.grid_value,
            "certified_tail": self.certified_tail,
        }


def weights(derivs, x, n):
    """``(1+x^2)^n |f^(j)(x)|`` for ``j = 0..n``; shape ``(n+1, P)``."""
    with np.errstate(over="ignore", invalid="ignore"):
        w = (1.0 + np.asarray(x) ** 2) ** n * np.abs(derivs[: n + 1])
    return np.nan_to_num(w, nan=0.0)


def _candidates(x, wmax, m=CANDIDATES):
    """Indices of the ``m`` largest local maxima of ``wmax`` along sorted ``x``."""
    if wmax.size == 0:
        return np.empty(0, dtype=int)
    left = np.concatenate([[-np.inf], wmax[:-1]])
    right = np.concatenate([wmax[1:], [-np.inf]])
    idx = np.flatnonzero((wmax >= left) & (wmax >= right) & (wmax > 0))
    if idx.size == 0:
        idx = np.array([int(np.argmax(wmax))])
    order = np.argsort(-wmax[idx], kind="stable")
    return idx[order[:m]]


def _local_spacing(x, idx):
    xl = x[np.maximum(idx - 1, 0)]
    xr = x[np.minimum(idx + 1, len(x) - 1)]
    return np.maximum(np.maximum(x[idx] - xl, xr - x[idx]), 1e-12)


def _zoom(centers, h):
    offs = np.linspace(-1.0, 1.0, ZOOM_POINTS)
    return (np.asarray(centers)[:, None] + np.asarray(h)[:, None] * offs[None, :]).ravel()


class _Best:
    __slots__ = ("value", "x", "j")

    def __init__(self):
        self.value, self.x, self.j = 0.0, 0.0, 0

    def update(self, x, W):
        if W.size == 0:
            return
        flat = int(np.argmax(W))
        j, i = divmod(flat, W.shape[1])
        if W[j, i] > self.value:
            self.value, self.x, self.j = float(W[j, i]), float(x[i]), int(j)


def seminorm_of(jetfun, n: int, points, levels: int = 3, tail_bound: float = 0.0, certified=True):
    """Grid estimate of ``pi_n`` for any jet provider ``jetfun(x, k)``."""
    x = np.asarray(points, dtype=float)
    best = _Best()
    W = weights(jetfun(x, n), x, n)
    best.update(x, W)
    idx = _candidates(x, W.max(axis=0))
    centers, h = x[idx], _local_spacing(x, idx)
    for _ in range(levels):
        pts = _zoom(centers, h)
        W = weights(jetfun(pts, n), pts, n)
        best.update(pts, W)
        wm = W.max(axis=0).reshape(len(centers), ZOOM_POINTS)
        centers = pts.reshape(len(centers), ZOOM_POINTS)[np.arange(len(centers)), wm.argmax(axis=1)]
        h = h / ZOOM_FACTOR
    return SeminormEstimate(n, max(best.value, tail_bound), best.x, best.j, tail_bound, best.value, certified)


def seminorm(f: SchwartzFn, n: int, grid: GridSpec = DEFAULT_GRID) -> SeminormEstimate:
    """``pi_n(f)``: grid maximum with local refinement, plus the certified tail bound.

    >>> from compop.schwartz import gaussian
    >>> round(seminorm(gaussian(), 0).value, 12)
    1.0
    """
    if not 0 <= n <= 8:
        raise ValueError("seminorm index must be in 0..8")
    tail = f.tail_bound(n, grid.L)
    return seminorm_of(f.jet, n, grid.points(), grid.refinement_levels, tail)


# --------------------------------------------------------------------------
# iterated jets on point batches

def _slice_jet(J, sl):
    if J.is_log:
        return LogJet(J.x[sl], J.sign[:, sl], J.log[:, sl])
    return Jet(J.x[sl], J.derivs[:, sl])


def _values(J):
    return np.asarray(J.value, dtype=float)


def orbit_values(phi, x, N: int, cap: float = DEFAULT_CAP):
    """Array ``(N+1, P)`` of ``phi_k(x)`` for ``k = 0..N`` (inf where overflowed)."""
    x = np.asarray(x, dtype=float)
    out = np.empty((N + 1,) + x.shape)
    out[0] = x
    J = Jet.variable(x, 0)
    for k in range(1, N + 1):
        J = step(phi, J, cap)
        out[k] = _values(J)
    return out


def orbit_window(phi, f: SchwartzFn, N: int, grid: GridSpec, reach: float = OUTER_REACH):
    """Sample points: the base grid plus uniform patches beyond ``[-L, L]`` where
    some ``f∘phi_k`` (k <= N) can be non-negligible.

    A log-spaced outer scan locates the preimages of ``f``'s essential support;
    each patch uses the base grid spacing.
    """
    base = grid.points()
    R = f.decay.radius()
    if not math.isfinite(R) or reach <= grid.L:
        return base
    side = np.geomspace(grid.L, reach, OUTER_POINTS + 1)[1:]
    scan = np.concatenate([-side[::-1], side])
    with np.errstate(all="ignore"):
        vals = orbit_values(phi, scan, N)[1:]
    hit = np.any(np.abs(vals) <= R, axis=0)
    patches = []
    h = grid.spacing
    for half in (slice(0, OUTER_POINTS), slice(OUTER_POINTS, 2 * OUTER_POINTS)):
        xs, hs = scan[half], hit[half]
        idx = np.flatnonzero(hs)
        if idx.size == 0:
            continue
        runs = np.split(idx, np.flatnonzero(np.diff(idx) > 1) + 1)
        for run in runs:
            lo = xs[max(run[0] - 1, 0)]
            hi = xs[min(run[-1] + 1, len(xs) - 1)]
            lo, hi = min(lo, hi), max(lo, hi)
            if xs[0] < 0:
                hi = min(hi, -grid.L)
            else:
                lo = max(lo, grid.L)
            patches.append((lo, hi))
    total = sum((hi - lo) / h for lo, hi in patches)
    if total > MAX_EXTRA_POINTS:
        h *= total / MAX_EXTRA_POINTS
    extra = [np.arange(lo, hi + h, h) for lo, hi in patches]
    if not extra:
        return base
    return np.unique(np.concatenate([base] + extra))


@dataclass
class OrbitProfile:
    estimates: List[SeminormEstimate]
    growth_flag: bool
    overflow: bool = False
    window: tuple = (0.0, 0.0)

    @property
    def values(self):
        return np.array([e.value for e in self.estimates])

    def to_dict(self):
        return {
            "values": [e.value for e in self.estimates],
            "argmax_x": [e.argmax_x for e in self.estimates],
            "argmax_j": [e.argmax_j for e in self.estimates],
            "growth_flag": self.growth_flag,
            "overflow": self.overflow,
            "window": list(self.window),
        }


def growth_flag(values, factor: float = 1.1) -> bool:
    """True if the last quartile's max reaches ``factor`` times the first quartile's."""
    v = np.asarray(values, dtype=float)
    q = max(1, len(v) // 4)
    return bool(np.max(v[-q:]) >= factor * np.max(v[:q]))


def orbit_seminorm_profile(phi, f: SchwartzFn, n: int, N: int, grid: GridSpec = DEFAULT_GRID,
                           cap: float = DEFAULT_CAP) -> OrbitProfile:
    """``pi_n(C_phi^k f)`` for ``k = 1..N`` with a growth diagnostic.

    Tails of ``f∘phi_k`` are not certified: the reported ``tail_bound`` is the
    largest weighted value seen on the outermost scan points.
    """
    if not 0 <= n <= 8:
        raise ValueError("seminorm index must be in 0..8")
    if not 1 <= N <= 500:
        raise ValueError("horizon must be in 1..500")
    x = orbit_window(phi, f, N, grid)
    bests = [_Best() for _ in range(N)]
    centers, spacings, edge = [], [], []
    overflow = False
    J = Jet.variable(x, n)
    for k in range(N):
        J = step(phi, J, cap)
        overflow |= J.is_log
        W = weights(f.compose_jet(J), x, n)
        bests[k].update(x, W)
        wmax = W.max(axis=0)
        idx = _candidates(x, wmax)
        centers.append(x[idx])
        spacings.append(_local_spacing(x, idx))
        edge.append(float(max(wmax[0], wmax[-1])))
    for _ in range(grid.refinement_levels):
        sizes = [len(c) * ZOOM_POINTS for c in centers]
        pts = np.concatenate([_zoom(c, h) for c, h in zip(centers, spacings)])
        offsets = np.concatenate([[0], np.cumsum(sizes)])
        J = Jet.variable(pts, n)
        new_centers = []
        for k in range(N):
            J = step(phi, J, cap)
            sl = slice(offsets[k] - offsets[k], offsets[k + 1] - offsets[k])
            Jk = _slice_jet(J, sl)
            pk = Jk.x
            W = weights(f.compose_jet(Jk), pk, n)
            bests[k].update(pk, W)
            wm = W.max(axis=0).reshape(-1, ZOOM_POINTS)
            new_centers.append(pk.reshape(-1, ZOOM_POINTS)[np.arange(wm.shape[0]), wm.argmax(axis=1)])
            # drop the points belonging to step k; later steps never need them
            J = _slice_jet(J, slice(sizes[k], None))
        centers = new_centers
        spacings = [h / ZOOM_FACTOR for h in spacings]
    ests = [
        SeminormEstimate(n, max(b.value, t), b.x, b.j, t, b.value, certified_tail=False)
        for b, t in zip(bests, edge)
    ]
    return OrbitProfile(ests, growth_flag([e.value for e in ests]), overflow, (float(x[0]), float(x[-1])))


# --------------------------------------------------------------------------
# Cesàro means

@dataclass
class CesaroResult:
    x: np.ndarray
    values: np.ndarray
    N: int
    sup_diffs: np.ndarray = field(repr=False)
    seminorm_index: int = 1
    seminorms: np.ndarray = field(default=None, repr=False)
    overflow: bool = False

    def on_grid(self, grid: GridSpec):
        """Mean restricted to the base grid points of ``grid``."""
        pts = grid.points()
        idx = np.searchsorted(self.x, pts)
        return pts, self.values[np.clip(idx, 0, len(self.x) - 1)]

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def to_dict(self):
        return {
            "N": self.N,
            "sup_norm": self.sup_norm,
            "seminorm_index": self.seminorm_index,
            "successive_sup_diff": self.sup_diffs.tolist(),
            "seminorm_history": self.seminorms.tolist(),
            "overflow": self.overflow,
        }


def cesaro_mean(phi, f: SchwartzFn, N: int, grid: GridSpec = DEFAULT_GRID, seminorm_index: int = 1,
                points=None, cap: float = DEFAULT_CAP) -> CesaroResult:
    """``T_[m] f = (1/m) sum_{k=1}^m f∘phi_k`` for ``m = 1..N`` on the sample points.

    Returns the final mean; ``sup_diffs[m-2]`` is ``||T_[m] f - T_[m-1] f||_sup``
    and ``seminorms[m-1]`` the unrefined grid value of ``pi_n(T_[m] f)``.
    """
    if not 1 <= N <= 500:
        raise ValueError("horizon must be in 1..500")
    n = seminorm_index
    x = np.asarray(points, dtype=float) if points is not None else orbit_window(phi, f, N, grid)
    J = Jet.variable(x, n)
    total = None
    prev = None
    diffs, pis = [], []
    overflow = False
    for m in range(1, N + 1):
        J = step(phi, J, cap)
        overflow |= J.is_log
        d = f.compose_jet(J)
        total = d.copy() if total is None else total + d
        mean = total / m
        if prev is not None:
            diffs.append(float(np.max(np.abs(mean[0] - prev))))
        prev = mean[0]
        pis.append(float(weights(mean, x, n).max()))
    return CesaroResult(x, prev, N, np.array(diffs), n, np.array(pis), overflow)


def cesaro_seminorm(phi, f: SchwartzFn, N: int, n: int, grid: GridSpec = DEFAULT_GRID,
                    cap: float = DEFAULT_CAP) -> SeminormEstimate:
    """Refined ``pi_n(T_[N] f)``."""
    x = orbit_window(phi, f, N, grid)

    def jetfun(pts, k):
        J = Jet.variable(pts, k)
        acc = 0.0
        for _ in range(N):
            J = step(phi, J, cap)
            acc = acc + f.compose_jet(J)
        return acc / N

    return seminorm_of(jetfun, n, x, grid.refinement_levels, 0.0, certified=False)


# --------------------------------------------------------------------------
# orbit limits of increasing symbols

def signed_values(expr, t):
    """Values of ``expr`` with underflowed zeros replaced by signed tiny numbers."""
    t = np.asarray(t, dtype=float)
    with np.errstate(all="ignore"):
        v = np.asarray(expr(t), dtype=float).copy()
    z = v == 0
    if np.any(z):
        s = eval_logjet(expr, t[z], 0).sign[0]
        v[z] = np.where(np.isnan(s), 0.0, s) * np.finfo(float).tiny
    return v


def _barrier(phi, x0: float, up: bool, reach: float = 1e6):
    """Nearest fixed point strictly ahead of ``x0`` in the direction of motion."""
    p = poly_from_expr(phi) if hasattr(phi, "root") else None
    if p is not None:
        pts = [r.estimate for r in fixed_points(p)]
        ahead = [t for t in pts if (t > x0 if up else t < x0)]
        if not ahead:
            return None
        return min(ahead) if up else max(ahead)
    if hasattr(phi, "root"):
        d = minus_identity(phi)

        def g(t):
            return signed_values(d, t)
    else:

        def g(t):
            return np.asarray(phi(t)) - t
    near = np.linspace(0.0, 100.0, 20001)[1:]
    far = np.geomspace(100.0, reach, 4001)[1:]
    offs = np.concatenate([near, far])
    ts = x0 + offs if up else x0 - offs
    with np.errstate(all="ignore"):
        v = g(ts)
    s0 = np.sign(g(np.array([x0]))[0])
    bad = np.flatnonzero(np.sign(v) != s0)
    if bad.size == 0:
        return None
    i = bad[0]
    if v[i] == 0:
        return float(ts[i])
    a = x0 if i == 0 else ts[i - 1]
    return float(brentq(lambda t: float(g(np.array([t]))[0]), min(a, ts[i]), max(a, ts[i]), xtol=1e-14))


def phi_star(phi, x: float, N: int = 10_000, tol: float = 1e-12, check: bool = True) -> float:
    """Monotone limit of the orbit ``phi_n(x)`` of an increasing symbol, in ``[-inf, inf]``.

    The orbit moves toward the nearest fixed point in its direction of motion
    (exact for polynomials, sign changes of ``phi(t) - t`` otherwise); with no
    such barrier the limit is infinite. For non-polynomial symbols the orbit is
    also followed for up to ``N`` steps and reported as stabilized once a step
    is shorter than ``tol``.
    """
    if check and monotonicity_classify(phi) is not Monotonicity.INCREASING:
        raise PreconditionError("orbit limit needs an increasing symbol", "phi is increasing")
    x = float(x)
    fx = float(phi(x))
    if fx == x:
        return x
    up = fx > x
    barrier = _barrier(phi, x, up)
    if barrier is not None:
        return barrier
    if poly_from_expr(phi) is None if hasattr(phi, "root") else True:
        # a tangential fixed point can hide between scan samples: watch the orbit
        cur = x
        for _ in range(N):
            nxt = float(phi(cur))
            if not math.isfinite(nxt) or abs(nxt) > 1e12:
                break
            if abs(nxt - cur) < tol:
                return nxt
            cur = nxt
    return math.inf if up else -math.inf
