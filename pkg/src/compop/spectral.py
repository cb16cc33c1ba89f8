"""Spectral constructions for composition operators on the Schwartz space.

Eigenfunctions of the ``sqrt(x^2+1)`` symbol, Neumann-series resolvents,
Zak-transform witnesses for the translation, non-surjectivity witnesses for
dilations and point spectra of injective symbols.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .dynamics import orbit_values
from .errors import PreconditionError
from .grid import DEFAULT_GRID, PROBE_GRID, GridSpec
from .involution import involution_from_even  # noqa: F401  (re-exported)
from .jets import Jet, step
from .monotone import Monotonicity, monotonicity_classify
from .poly import Poly, poly_from_expr
from .schwartz import SchwartzFn, bump, plateau
from .symbols import SymbolExpr, X, as_expr, sqrt

SPECTRAL_CITATIONS = {
    "S.eigen_disc": "Eigenvalue construction for sqrt(x^2+1): every lambda in the open unit disc is an eigenvalue",
    "S.eigen_bound": "Unbounded-orbit proposition: if every orbit is unbounded the point spectrum lies in the open disc",
    "S.neumann": "Neumann series proposition: for |lambda| > 1 the resolvent is -sum lambda^-(n+1) T^n",
    "S.power_bounded": "Decay corollary: sup_x sum (1+|phi_n(x)|)^-p < inf puts the spectrum inside the open disc",
    "S.zak": "Zak transform: Zf(x,w) = sum f(x-k) e^{2 pi i k w}, with int_0^1 Zf e^{-2 pi i x w} dx = f^(w)",
    "S.translation": "Translation example: the spectrum of x+1 is the unit circle and the point spectrum is empty",
    "S.dilation": "Dilation example: for ax with |a| != 1 the spectrum is C minus {0}",
    "S.increasing": "Injective increasing symbols: point spectrum {1} iff the fixed set has interior, else empty",
    "S.decreasing": "Injective decreasing symbols: point spectrum {-1,1} iff phi∘phi fixes an interval, else empty",
    "S.reflection": "Reflection remark: for -x the spectrum and point spectrum are {-1,1}",
}

EIGEN_TOL = 1e-12
MAX_DEPTH = 200
FIXED_TOL = 1e-12
FIXED_RUN = 8
# tails where e^{-x^2}-type terms underflow would fake a fixed interval
FIXED_CORE = 2.0
TERM_TOL = 1e-14
GL_NODES = 64


def _cite(rid):
    return {"id": rid, "citation": SPECTRAL_CITATIONS[rid]}


def _cjson(z):
    z = complex(z)
    return {"re": z.real, "im": z.imag}


# --------------------------------------------------------------------------
# piecewise functions

@dataclass(frozen=True)
class FnPiece:
    """``multiplier * base(inner(x))`` on the open interval ``(lo, hi)``."""

    lo: float
    hi: float
    multiplier: complex
    base: SchwartzFn
    inner: SymbolExpr


@dataclass(frozen=True)
class PiecewiseFn:
    """Sum of disjoint pieces, zero elsewhere; optionally mirrored to an even function."""

    pieces: Tuple[FnPiece, ...]
    even_reflection: bool = False

    def __post_init__(self):
        ps = tuple(sorted(self.pieces, key=lambda p: p.lo))
        for p in ps:
            if not p.lo < p.hi:
                raise ValueError(f"empty piece ({p.lo}, {p.hi})")
        for p, q in zip(ps, ps[1:]):
            if q.lo < p.hi:
                raise ValueError(f"pieces ({p.lo}, {p.hi}) and ({q.lo}, {q.hi}) overlap")
        object.__setattr__(self, "pieces", ps)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        y = np.abs(x) if self.even_reflection else x
        out = np.zeros(x.shape, dtype=complex)
        if not self.pieces:
            return out
        los = np.array([p.lo for p in self.pieces])
        idx = np.searchsorted(los, y, side="right") - 1
        hit = idx >= 0
        his = np.array([p.hi for p in self.pieces])
        hit &= (y > los[np.clip(idx, 0, None)]) & (y < his[np.clip(idx, 0, None)])
        for i in np.unique(idx[hit]):
            m = hit & (idx == i)
            p = self.pieces[i]
            if p.multiplier == 0:
                continue
            out[m] = p.multiplier * p.base(p.inner(y[m]))
        return out

    def scaled(self, c) -> "PiecewiseFn":
        return PiecewiseFn(
            tuple(FnPiece(p.lo, p.hi, p.multiplier * c, p.base, p.inner) for p in self.pieces),
            self.even_reflection,
        )

    def to_dict(self) -> dict:
        return {
            "even_reflection": self.even_reflection,
            "pieces": [
                {
                    "lo": p.lo,
                    "hi": p.hi,
                    "multiplier": _cjson(p.multiplier),
                    "base": p.base.name,
                    "inner": p.inner.text,
                }
                for p in self.pieces
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def sample_csv(self, xs) -> str:
        """CSV text with columns ``x,re,im``."""
        xs = np.asarray(xs, dtype=float)
        v = self(xs)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "re", "im"])
        for a, b in zip(xs, v):
            w.writerow([repr(float(a)), repr(float(b.real)), repr(float(b.imag))])
        return buf.getvalue()


@dataclass
class EigenResult:
    f: PiecewiseFn
    lam: complex
    depth: int
    residual: float
    sup_abs: float
    n_validation: int
    citations: list = field(default_factory=list)

    @property
    def passes(self) -> bool:
        return self.residual <= 1e-8 * (1 + self.sup_abs)

    def to_dict(self):
        return {
            "lambda": _cjson(self.lam),
            "depth": self.depth,
            "residual": self.residual,
            "sup_abs": self.sup_abs,
            "n_validation": self.n_validation,
            "function": self.f.to_dict(),
        }


def sqrt_symbol() -> SymbolExpr:
    return sqrt(X**2 + 1)


def eigen_depth(lam: complex, tol: float = EIGEN_TOL, cap: int = MAX_DEPTH) -> int:
    """Smallest ``d`` with ``|lam|^d < tol``, capped."""
    r = abs(lam)
    if r == 0:
        return 0
    return min(cap, max(1, math.ceil(math.log(tol) / math.log(r)) + 1))


def _validation_points(f: PiecewiseFn, per_piece: int = 65) -> np.ndarray:
    """Clustered points inside every piece and around its endpoints, mirrored if even."""
    t = 0.5 * (1 - np.cos(np.linspace(0.0, np.pi, per_piece)))
    chunks = []
    for p in f.pieces:
        w = p.hi - p.lo
        chunks.append(p.lo + w * t)
        edge = w * np.geomspace(1e-6, 0.05, 12)
        chunks.extend([p.lo - edge, p.lo + edge, p.hi - edge, p.hi + edge])
    reach = max((p.hi for p in f.pieces), default=1.0) + 1.0
    chunks.append(np.linspace(0.0, reach, 4001))
    xs = np.unique(np.concatenate(chunks))
    if f.even_reflection:
        xs = np.unique(np.concatenate([-xs, xs]))
    return xs


def eigenfunction_sqrt(lam, psi: Optional[SchwartzFn] = None, depth: Optional[int] = None,
                       validate: bool = True) -> EigenResult:
    """Eigenfunction of ``f -> f∘phi`` for ``phi(x) = sqrt(x^2+1)`` with eigenvalue ``lam``.

    On ``phi_n(I) = (sqrt(1/16+n), sqrt(1/4+n))`` the function equals
    ``lam^n psi(sqrt(x^2-n))``; it is even and zero elsewhere.
    """
    lam = complex(lam)
    if not abs(lam) < 1:
        raise PreconditionError(
            f"|lambda| = {abs(lam):.6g} is not below 1; the point spectrum is the open unit disc",
            "|lambda| < 1",
        )
    psi = bump(0.25, 0.5) if psi is None else psi
    sup = psi.decay.support
    if psi.decay.kind == "zero":
        pass
    elif sup is None or sup[0] < 0.25 or sup[1] > 0.5:
        raise PreconditionError("psi must vanish outside [1/4, 1/2]", "psi supported in I = (1/4, 1/2)")
    if depth is None:
        depth = eigen_depth(lam)
    if depth < 0:
        raise ValueError("depth must be non-negative")
    pieces = []
    for n in range(depth + 1):
        mult = lam**n if n else complex(1.0)
        if mult == 0:
            break
        inner = sqrt(X**2 - n) if n else X
        pieces.append(FnPiece(math.sqrt(1 / 16 + n), math.sqrt(1 / 4 + n), mult, psi, inner))
    f = PiecewiseFn(tuple(pieces), even_reflection=True)
    res, supv, nv = float("nan"), float("nan"), 0
    if validate:
        xs = _validation_points(f)
        phi = sqrt_symbol()
        fx = f(xs)
        r = f(phi(xs)) - lam * fx
        res, supv, nv = float(np.max(np.abs(r))), float(np.max(np.abs(fx))), xs.size
    return EigenResult(f, lam, depth, res, supv, nv, [_cite("S.eigen_disc"), _cite("S.eigen_bound")])


# --------------------------------------------------------------------------
# resolvents

@dataclass
class ResolventResult:
    lam: complex
    x: np.ndarray
    values: np.ndarray
    residual: float
    history: np.ndarray
    ratios: np.ndarray
    terms: int
    converging: bool
    notes: List[str] = field(default_factory=list)
    decay: Optional["DecayCheck"] = None
    citations: list = field(default_factory=list)

    def to_dict(self):
        out = {
            "lambda": _cjson(self.lam),
            "residual": self.residual,
            "terms": self.terms,
            "converging": self.converging,
            "residual_history": [float(v) for v in self.history],
            "ratios": [float(v) for v in self.ratios],
            "notes": list(self.notes),
        }
        if self.decay is not None:
            out["decay_check"] = self.decay.to_dict()
        return out


def _series_residuals(phi, lam, g, x, N):
    """Partial sums ``f_m`` for ``m <= N`` and residuals of ``f_m∘phi - lam f_m - g``."""
    orb = orbit_values(phi, x, N)
    fx1 = orbit_values(phi, x, 1)[1]
    orb1 = orbit_values(phi, fx1, N)
    g0 = np.asarray(g(x))
    A = np.zeros(x.shape, dtype=complex)
    B = np.zeros(x.shape, dtype=complex)
    hist = np.empty(N + 1)
    term_sup = np.empty(N + 1)
    for n in range(N + 1):
        c = lam ** (-(n + 1))
        ta = c * np.asarray(g(orb[n]))
        A -= ta
        B -= c * np.asarray(g(orb1[n]))
        hist[n] = float(np.max(np.abs(B - lam * A - g0)))
        term_sup[n] = float(np.max(np.abs(ta)))
    return A, hist, term_sup


def _ratios(hist, floor):
    out = []
    for a, b in zip(hist, hist[1:]):
        if a > floor:
            out.append(b / a)
    return np.array(out)


def neumann_resolvent(phi, lam, g: SchwartzFn, trunc: int = 60, grid: GridSpec = DEFAULT_GRID) -> ResolventResult:
    """Partial sum ``f_N = -sum_{n<=N} lam^-(n+1) g∘phi_n`` of the resolvent series.

    The residual ``f_N∘phi - lam f_N - g`` is evaluated directly on the grid.
    """
    lam = complex(lam)
    if not abs(lam) > 1:
        raise PreconditionError(f"|lambda| = {abs(lam):.6g} is not above 1", "|lambda| > 1")
    if trunc < 1:
        raise ValueError("trunc must be at least 1")
    phi = as_expr(phi) if isinstance(phi, str) else phi
    x = grid.points()
    f, hist, _ = _series_residuals(phi, lam, g, x, trunc)
    floor = TERM_TOL * max(1.0, g.sup_abs(x))
    ratios = _ratios(hist, floor)
    converging = bool(hist[-1] <= max(floor, hist[0]) and np.all(ratios <= 1.0 + 1e-9))
    notes = [] if converging else ["residual is not decreasing; the series may not converge for this symbol"]
    return ResolventResult(lam, x, f, float(hist[-1]), hist, ratios, trunc, converging, notes,
                           citations=[_cite("S.neumann")])


@dataclass
class DecayCheck:
    p: float
    sizes: Tuple[int, ...]
    sups: Tuple[float, ...]
    ratios: Tuple[float, ...]
    certified: bool

    def to_dict(self):
        return {"p": self.p, "sizes": list(self.sizes), "sups": list(self.sups),
                "ratios": list(self.ratios), "certified": self.certified}


def decay_check(phi, p: float = 3.0, sizes=(16, 32, 64, 128, 256), L: float = 30.0,
                spacing: float = 0.25, max_ratio: float = 0.8, settle: int = 2) -> DecayCheck:
    """Doubling test for ``sup_x sum_n (1+|phi_n(x)|)^-p``.

    For each ``M`` the block ``sum_{M<n<=2M}`` is maximized over
    ``|x| <= 2M + L``; over the last ``settle`` doublings the blocks must shrink
    by at least ``max_ratio`` (a bounded series has blocks tending to zero).
    """
    sups = []
    for M in sizes:
        W = 2 * M + L
        x = np.arange(-W, W + spacing / 2, spacing)
        orb = orbit_values(phi, x, 2 * M)
        with np.errstate(all="ignore"):
            blk = np.sum((1 + np.abs(orb[M + 1:])) ** (-p), axis=0)
        sups.append(float(np.max(blk)))
    ratios = tuple(b / a if a > 0 else 0.0 for a, b in zip(sups, sups[1:]))
    ok = all(r <= max_ratio for r in ratios[-settle:])
    return DecayCheck(p, tuple(sizes), tuple(sups), ratios, ok)


def power_bounded_resolvent(phi, lam, g: SchwartzFn, p: float = 3.0, trunc: int = 10_000,
                            grid: GridSpec = DEFAULT_GRID, tol: float = TERM_TOL) -> ResolventResult:
    """Resolvent at a point of the unit circle when the orbit decay series is bounded."""
    lam = complex(lam)
    if abs(abs(lam) - 1) > 1e-12:
        raise PreconditionError(f"|lambda| = {abs(lam):.6g} is not on the unit circle", "|lambda| = 1")
    phi = as_expr(phi) if isinstance(phi, str) else phi
    dc = decay_check(phi, p, L=grid.L)
    if not dc.certified:
        raise PreconditionError(
            f"decay series check failed (doubling ratios {', '.join(f'{r:.3f}' for r in dc.ratios)})",
            f"sup_x sum_n (1+|phi_n(x)|)^-{p:g} < inf",
        )
    x = grid.points()
    # truncate once five consecutive terms are below tol
    J = Jet.variable(x.copy(), 0)
    N, small = trunc, 0
    for n in range(trunc + 1):
        small = small + 1 if float(np.max(np.abs(g(np.asarray(J.value, dtype=float))))) < tol else 0
        if small >= 5:
            N = n
            break
        J = step(phi, J)
    f, hist, _ = _series_residuals(phi, lam, g, x, N)
    notes = []
    if N >= trunc:
        notes.append(f"series truncated at {trunc} terms before the term size fell below {tol:g}")
    floor = tol * max(1.0, g.sup_abs(x))
    ratios = _ratios(hist, floor)
    return ResolventResult(lam, x, f, float(hist[-1]), hist, ratios, N, N < trunc, notes, dc,
                           [_cite("S.power_bounded")])


# --------------------------------------------------------------------------
# Zak transform

@dataclass
class ZakValue:
    value: np.ndarray
    error: np.ndarray
    K: int


def _decay_sum(f: SchwartzFn, m0: float) -> float:
    """Bound for ``sum_{|k|>K} |f(x-k)|`` when every ``|x-k| >= m0``."""
    if f.decay.kind == "zero":
        return 0.0
    if f.decay.kind == "bump" and m0 > f.decay.radius():
        return 0.0
    if f.decay.kind == "rational" and f.decay.power <= 0.5:
        return math.inf
    total, m = 0.0, max(m0, 0.0)
    for _ in range(10_000):
        t = f.tail_bound(0, m)
        if not math.isfinite(t):
            return math.inf
        total += 2 * t
        if t < 1e-300:
            return total
        m += 1.0
    if f.decay.kind == "rational":
        q = 2 * f.decay.power
        return total + 2 * abs(f.scale) * f.decay.constant * m ** (1 - q) / (q - 1)
    return math.inf


def default_zak_K(f: SchwartzFn, x) -> int:
    r = f.decay.radius()
    r = 40.0 if not math.isfinite(r) else r
    return int(math.ceil(float(np.max(np.abs(x))) + r)) + 2


def zak_transform(f: SchwartzFn, x, omega, K: Optional[int] = None) -> ZakValue:
    """``sum_{|k|<=K} f(x-k) e^{2 pi i k w}`` with an error bar for the dropped tail."""
    x = np.asarray(x, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if K is None:
        K = default_zak_K(f, x)
    if K < 1:
        raise ValueError("K must be at least 1")
    x, omega = np.broadcast_arrays(x, omega)
    acc = np.zeros(x.shape, dtype=complex)
    mag = np.zeros(x.shape)
    for k in range(-K, K + 1):
        v = np.asarray(f(x - k))
        acc += v * np.exp(2j * np.pi * k * omega)
        mag += np.abs(v)
    m0 = K + 1 - np.abs(x)
    tail = np.vectorize(lambda m: _decay_sum(f, m), otypes=[float])(m0)
    err = tail + 4 * (2 * K + 1) * np.finfo(float).eps * mag
    return ZakValue(acc, err, K)


def zak_fourier(f: SchwartzFn, omega, nodes: int = GL_NODES) -> np.ndarray:
    """``int_0^1 Zf(x,w) e^{-2 pi i x w} dx`` by Gauss-Legendre quadrature."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    t, w = np.polynomial.legendre.leggauss(nodes)
    xs, ws = 0.5 * (t + 1), 0.5 * w
    Z = zak_transform(f, xs[None, :], omega[:, None]).value
    return np.sum(Z * np.exp(-2j * np.pi * xs[None, :] * omega[:, None]) * ws[None, :], axis=1)


@dataclass
class TranslationWitness:
    status: str
    omega: float
    lam: complex
    x: Optional[float]
    zak: complex
    error: float
    fourier: complex
    citations: list = field(default_factory=list)

    def to_dict(self):
        return {"status": self.status, "omega": self.omega, "lambda": _cjson(self.lam),
                "x": self.x, "zak": _cjson(self.zak), "error": self.error,
                "fourier": _cjson(self.fourier)}


def translation_spectrum_witness(g: SchwartzFn, omega: float, n_x: int = 256) -> TranslationWitness:
    """Certify ``e^{2 pi i w}`` in the spectrum of the translation by a nonzero Zak value.

    If ``C_phi - lam`` were onto, the solution of ``f(x+1) - lam f(x) = g`` would
    force ``Zg(., w) = 0``; one point with ``|Zg| > 10 * error`` rules that out.
    """
    omega = float(omega)
    lam = complex(np.exp(2j * np.pi * omega))
    cites = [_cite("S.translation"), _cite("S.zak")]
    if g.decay.kind == "zero" or g.scale == 0:
        return TranslationWitness("inconclusive", omega, lam, None, 0j, 0.0, 0j, cites)
    xs = np.arange(n_x) / n_x
    z = zak_transform(g, xs, omega)
    floor = 1e-13 * g.sup_abs()
    ok = np.abs(z.value) > 10 * z.error + floor
    fourier = complex(zak_fourier(g, omega)[0])
    if not np.any(ok):
        i = int(np.argmax(np.abs(z.value)))
        return TranslationWitness("inconclusive", omega, lam, None, complex(z.value[i]), float(z.error[i]),
                                  fourier, cites)
    i = int(np.argmax(np.where(ok, np.abs(z.value), -1.0)))
    return TranslationWitness("in_spectrum", omega, lam, float(xs[i]), complex(z.value[i]), float(z.error[i]),
                              fourier, cites)


# --------------------------------------------------------------------------
# dilations

@dataclass
class DilationWitness:
    a: float
    lam: complex
    inverted: bool
    case: str
    j: int
    ratio: float
    sequence: List[float]
    oracle: List[float]
    discrepancy: float
    citations: list = field(default_factory=list)

    def to_dict(self):
        return {"a": self.a, "lambda": _cjson(self.lam), "inverted": self.inverted, "case": self.case,
                "j": self.j, "ratio": self.ratio, "sequence": self.sequence, "oracle": self.oracle,
                "discrepancy": self.discrepancy}


def _gj(j: int, cut: SchwartzFn, y):
    """``d^j/dx^j [x^j/j! * cut(x)]`` at ``y``."""
    y = np.asarray(y, dtype=float)
    mono = Jet.variable(y, j).powi(j) * (1.0 / math.factorial(j)) if j else Jet.variable(y, 0).constant(1.0)
    return (mono * Jet(y, cut.jet(y, j))).derivs[j]


def dilation_nonsurjectivity_witness(a: float, lam, jmax: int = 8, mmax: int = 30) -> DilationWitness:
    """Show ``C_phi - lam`` is not onto for ``phi(x) = a x``.

    Returns the exponent ``j`` and the growing sequence that a would-be solution
    would have to follow, both in closed form and re-derived from the series with
    an explicit test function (``oracle``).
    """
    a = float(a)
    lam = complex(lam)
    if lam == 0:
        raise PreconditionError("lambda = 0 is excluded", "lambda != 0")
    if a == 0 or abs(a) == 1:
        raise PreconditionError(f"a = {a:g} is not a dilation with |a| != 1", "a != 0 and |a| != 1")
    inverted = abs(a) < 1
    if inverted:
        a, lam = 1 / a, 1 / lam
    cut = plateau(1.0, abs(a))
    cites = [_cite("S.dilation")]
    if abs(lam) >= 1:
        js = [j for j in range(jmax + 1) if abs(a**j / lam) > 1]
        if not js:
            raise PreconditionError(f"no j <= {jmax} with |a^j/lambda| > 1", "|a^j / lambda| > 1 for some j <= jmax")
        j = js[0]
        r = a**j / lam
        # f^(j)(a^-m) = -(1/lam) sum_{k<=m} r^k
        seq = [abs(-(1 / lam) * sum(r**k for k in range(m + 1))) for m in range(mmax + 1)]
        oracle = []
        for m in range(mmax + 1):
            s = 0j
            for k in range(m + 3):
                s += r**k * _gj(j, cut, a ** (k - m))
            oracle.append(abs(-(1 / lam) * s))
        case = "derivative_blowup"
    else:
        js = [j for j in range(jmax + 1) if abs(lam * a**j) > 1]
        if not js:
            raise PreconditionError(f"no j <= {jmax} with |lambda a^j| > 1", "|lambda a^j| > 1 for some j <= jmax")
        j = js[0]
        r = lam * a**j
        # |a^m|^j |f(a^m)| with f(a^m) = lam^(m-1)/(1-lam), m >= 1
        seq = [abs(a**m) ** j * abs(lam ** (m - 1) / (1 - lam)) for m in range(1, mmax + 1)]
        oracle = []
        kmax = int(math.ceil(math.log(1e-18) / math.log(abs(lam))))
        for m in range(1, mmax + 1):
            ks = np.arange(1, m + kmax + 1)
            s = np.sum(lam**ks * cut(a ** (m - ks.astype(float)))) / lam
            oracle.append(abs(a**m) ** j * abs(s))
        case = "weighted_growth"
    disc = max(abs(u - v) / max(abs(u), 1e-300) for u, v in zip(seq, oracle))
    return DilationWitness(a, lam, inverted, case, j, abs(r), seq, oracle, disc, cites)


# --------------------------------------------------------------------------
# point spectra of injective symbols

@dataclass
class SpectrumReport:
    symbol_text: str
    monotonicity: str
    point_spectrum: str
    spectrum: str
    witnesses: List[str]
    rules_fired: List[dict]
    fixed_interval: Optional[Tuple[float, float]] = None

    def to_dict(self):
        return {
            "symbol": self.symbol_text,
            "monotonicity": self.monotonicity,
            "point_spectrum": self.point_spectrum,
            "spectrum": {"description": self.spectrum, "witnesses": list(self.witnesses)},
            "rules_fired": list(self.rules_fired),
            "fixed_interval": list(self.fixed_interval) if self.fixed_interval else None,
        }


def _fixed_interval(fn, xs):
    """First run of ``FIXED_RUN`` consecutive core probe points fixed by ``fn``.

    Symbols built from the grammar are real-analytic, so an interval of fixed
    points anywhere forces one in the core window too.
    """
    xs = np.union1d(xs[np.abs(xs) <= FIXED_CORE], np.linspace(-FIXED_CORE, FIXED_CORE, 801))
    with np.errstate(all="ignore"):
        d = np.abs(np.asarray(fn(xs), dtype=float) - xs)
    ok = d <= FIXED_TOL * (1 + np.abs(xs))
    run = 0
    for i, v in enumerate(ok):
        run = run + 1 if v else 0
        if run >= FIXED_RUN:
            lo = i - FIXED_RUN + 1
            hi = lo
            while hi + 1 < len(ok) and ok[hi + 1]:
                hi += 1
            return float(xs[lo]), float(xs[hi])
    return None


def _known_spectrum(phi, p: Optional[Poly]):
    """Full spectrum for the families with a worked answer, else ``None``."""
    if p is not None and p.degree == 1:
        b, a = p.coeffs[0] if len(p.coeffs) > 1 else 0, p.coeffs[-1]
        if a == 1 and b != 0:
            return "unit circle |lambda| = 1", ["translation-witness"], "S.translation"
        if a == -1 and b == 0:
            return "{-1, 1}", [], "S.reflection"
        if b == 0 and abs(a) != 1:
            return "C minus {0}", ["dilation-witness"], "S.dilation"
    if hasattr(phi, "root") and phi.text == sqrt_symbol().text:
        return "open unit disc", ["eigen-sqrt"], "S.eigen_disc"
    return None


def injective_point_spectrum(phi, probe: GridSpec = PROBE_GRID) -> SpectrumReport:
    """Point spectrum of ``C_phi`` for a strictly monotone symbol."""
    phi = as_expr(phi) if isinstance(phi, str) else phi
    mono = monotonicity_classify(phi, probe)
    if mono not in (Monotonicity.INCREASING, Monotonicity.DECREASING):
        raise PreconditionError(f"symbol is {mono}, not injective", "phi strictly increasing or decreasing")
    p = poly_from_expr(phi) if hasattr(phi, "root") else None
    xs = probe.probe_points()
    if mono is Monotonicity.INCREASING:
        rid = "S.increasing"
        if p is not None:
            interval = (float(xs[0]), float(xs[-1])) if p == Poly.x() else None
        else:
            interval = _fixed_interval(phi, xs)
        ps = "{1}" if interval else "empty"
    else:
        rid = "S.decreasing"
        if p is not None:
            interval = (float(xs[0]), float(xs[-1])) if p.compose(p) == Poly.x() else None
        else:
            interval = _fixed_interval(lambda t: phi(phi(t)), xs)
        ps = "{-1, 1}" if interval else "empty"
    rules = [_cite(rid)]
    known = _known_spectrum(phi, p)
    if known:
        spec, wit, krid = known
        rules.append(_cite(krid))
    elif ps == "{1}" and p is not None:
        spec, wit = "{1}", []
    else:
        spec, wit = f"contains the point spectrum {ps}; rest undetermined", []
    return SpectrumReport(phi.text, str(mono), ps, spec, wit, rules, interval)
