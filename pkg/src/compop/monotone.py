"""Monotonicity of a symbol: exact for polynomials, sampled otherwise."""

from __future__ import annotations

import enum

import numpy as np

from .jets import eval_logjet
from .grid import GridSpec, PROBE_GRID
from .poly import isolate_real_roots, poly_from_expr

MIN_PROBE_POINTS = 512


class Monotonicity(str, enum.Enum):
    INCREASING = "Increasing"
    DECREASING = "Decreasing"
    NON_MONOTONE = "NonMonotone"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


def _poly_monotonicity(p):
    d = p.derivative()
    if d.is_zero():
        return Monotonicity.INCONCLUSIVE
    # strict monotonicity survives zeros of even multiplicity of p'
    if d.degree > 0 and any(r.multiplicity_hint % 2 for r in isolate_real_roots(d)):
        return Monotonicity.NON_MONOTONE
    return Monotonicity.INCREASING if d.lc > 0 else Monotonicity.DECREASING


def derivative_signs(phi, xs):
    """Values of ``phi'`` on ``xs``; underflow and overflow are re-signed in log arithmetic."""
    with np.errstate(all="ignore"):
        d = np.asarray(phi.jet(xs, 1).derivs[1], dtype=float)
    bad = (d == 0) | ~np.isfinite(d)
    if np.any(bad) and hasattr(phi, "root"):
        lj = eval_logjet(phi, xs[bad], 1)
        d[bad] = np.where(np.isnan(lj.sign[1]), np.nan, lj.sign[1] * np.finfo(float).tiny)
    return d


def monotonicity_classify(phi, probe: GridSpec = PROBE_GRID) -> Monotonicity:
    """Classify ``phi`` as Increasing, Decreasing, NonMonotone or Inconclusive.

    Polynomials are decided exactly from the real roots of ``phi'`` (a strictly
    monotone polynomial such as ``x^3`` is Increasing even though ``phi'(0) = 0``).
    Other symbols are judged from the sign of ``phi'`` on the probe points.
    """
    if probe.N < MIN_PROBE_POINTS:
        raise ValueError(f"monotonicity probe needs at least {MIN_PROBE_POINTS} points")
    if hasattr(phi, "root"):
        p = poly_from_expr(phi)
        if p is not None:
            return _poly_monotonicity(p)
    d = derivative_signs(phi, probe.probe_points())
    if not np.all(np.isfinite(d)):
        return Monotonicity.INCONCLUSIVE
    pos, neg = np.any(d > 0), np.any(d < 0)
    if pos and neg:
        return Monotonicity.NON_MONOTONE
    if np.any(d == 0):
        return Monotonicity.INCONCLUSIVE
    return Monotonicity.INCREASING if pos else Monotonicity.DECREASING
