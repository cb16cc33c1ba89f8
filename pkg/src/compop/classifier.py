"""Power boundedness and mean ergodicity verdicts for composition operators.

Exact rules for affine and polynomial symbols come first; monotone symbols are
handled by the increasing/decreasing criteria; everything else gets a verdict
only from a re-validated witness. The increasing case without fixed points whose
displacement ``phi(x) - x`` dies out on the relevant tail is reported as
``unknown``, never guessed.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import List, Optional

import numpy as np
from scipy.optimize import brentq

from .dynamics import signed_values
from .errors import DomainError, PreconditionError
from .grid import GridSpec, PROBE_GRID
from .jets import Jet, LogJet, eval_logjet, step
from .monotone import Monotonicity, monotonicity_classify
from .poly import Poly, cauchy_bound, fixed_points, poly_from_expr, sturm_root_count, yun_decomposition
from .symbols import as_expr, minus_identity

YES, NO, UNKNOWN = "yes", "no", "unknown"
PASS, FAIL, HEURISTIC = "pass", "fail", "heuristic_pass"

CITATIONS = {
    "R1.affine": "Affine symbol remark: for phi(x) = ax + b, mean ergodic iff phi(x) = x or phi(x) = -x + b",
    "R1.monotone": "Monotone symbol theorem: an increasing symbol is power bounded iff phi(x) = x",
    "R1.decreasing": "Decreasing symbol proposition: power bounded iff mean ergodic iff phi∘phi = id",
    "R2.even_no_fixed_points": "Polynomial symbol theorem, condition (3): the degree is even and there are no fixed points",
    "R2.fixed_point": "Polynomial symbol theorem, condition (3) fails: the polynomial has a real fixed point",
    "R2.odd_degree": "Polynomial symbol theorem, condition (3) fails: odd degree above one forces a fixed point",
    "R3.identity": "Monotone symbol theorem: an increasing symbol is power bounded iff phi(x) = x",
    "R3.fixed_point": "Increasing symbol proposition: a fixed point with phi != id rules out mean ergodicity",
    "R3.displaced": "Asymptotic displacement corollary: phi(x) - x bounded away from 0 on the relevant tail rules out mean ergodicity",
    "R3.open_case": "Open case remark: increasing, no fixed points, asymptotic to the diagonal (as for x+exp(-x^2)); undecided",
    "R4.involution": "Decreasing symbol proposition: power bounded iff mean ergodic iff phi∘phi = id",
    "R4.not_involution": "Decreasing symbol proposition: phi∘phi != id, so neither power bounded nor mean ergodic",
    "R5.bounded_image": "Bounded-image lemma (b): |x_n|^k >= n with phi_n(x_n) bounded rules out mean ergodicity",
    "R5.bounded_orbit": "Bounded-orbit proposition: a bounded orbit with all far orbits divergent rules out mean ergodicity",
    "R5.no_witness": "No exact rule applies and no witness was found; verdict left open",
    "FM": "Frechet-Montel remark: power bounded implies uniformly mean ergodic; mean ergodic equals uniformly mean ergodic here",
}

SUPERCYCLIC_NOTE = "composition operators on the Schwartz space are never supercyclic (static fact, not computed)"
SEMINORM_NOTE = "seminorms pi_n include the j = 0 term"
TANGENT_CAVEAT = "fixed points tangential to the diagonal between probe samples may be missed"


@dataclass
class ClassifierConfig:
    probe: GridSpec = PROBE_GRID
    k_max: int = 64
    N: int = 100
    jmax: int = 3
    tol_involution: float = 1e-9
    delta_min: float = 1e-6
    horizon: int = 200
    bound_M: float = 1.0
    witness_k: int = 2
    tail_lo: float = 1e3
    tail_hi: float = 1e6
    run_probe: bool = True


@dataclass
class SymbolCheck:
    condition_i: str
    condition_ii: str
    details_i: List[dict] = field(default_factory=list)
    k: Optional[int] = None
    counterexample: Optional[dict] = None
    notes: List[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return FAIL in (self.condition_i, self.condition_ii)

    def to_dict(self):
        return asdict(self)


@dataclass
class Witness:
    kind: str
    data: dict
    rule_ref: str

    def to_dict(self):
        return {"kind": self.kind, "data": self.data, "rule_ref": self.rule_ref}


@dataclass
class ClassificationReport:
    symbol_text: str
    symbol_check: SymbolCheck
    shape: dict
    power_bounded: str
    mean_ergodic: str
    uniformly_mean_ergodic: str
    rules_fired: List[dict] = field(default_factory=list)
    witnesses: List[Witness] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    caveats: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def rule_ids(self):
        return [r["id"] for r in self.rules_fired]

    def violations(self) -> List[str]:
        """Broken consistency couplings (empty for a valid report)."""
        out = []
        pb, me, ume = self.power_bounded, self.mean_ergodic, self.uniformly_mean_ergodic
        if pb == YES and (me != YES or ume != YES):
            out.append("power bounded without (uniform) mean ergodicity")
        if me == NO and pb != NO:
            out.append("not mean ergodic but power boundedness not excluded")
        if me != ume:
            out.append("mean ergodic and uniformly mean ergodic differ")
        kind = self.shape.get("kind")
        if kind == "polynomial" and self.shape.get("degree", 0) >= 2 and pb != me:
            out.append("polynomial verdicts split")
        if kind == "monotone" and self.shape.get("direction") == "Decreasing" and pb != me:
            out.append("decreasing verdicts split")
        return out

    def to_dict(self):
        return {
            "symbol_text": self.symbol_text,
            "symbol_check": self.symbol_check.to_dict(),
            "shape": self.shape,
            "power_bounded": self.power_bounded,
            "mean_ergodic": self.mean_ergodic,
            "uniformly_mean_ergodic": self.uniformly_mean_ergodic,
            "rules_fired": self.rules_fired,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "diagnostics": self.diagnostics,
            "caveats": self.caveats,
            "notes": self.notes,
        }


def _rule(rid):
    return {"id": rid, "citation": CITATIONS[rid]}


def _is_expr(phi):
    return hasattr(phi, "root")


def _coerce(phi):
    return as_expr(phi) if isinstance(phi, str) else phi


def _log_jets(phi, xs, k):
    """``(sign, log|.|)`` arrays of the derivatives of ``phi`` up to order ``k``."""
    if _is_expr(phi):
        lj = eval_logjet(phi, xs, k)
        return lj.sign, lj.log
    d = phi.jet(xs, k).derivs
    with np.errstate(divide="ignore"):
        return np.sign(d), np.log(np.abs(d))


def _log1p_sq(sign0, log0):
    """``log(1 + v^2)`` from a signed log magnitude."""
    with np.errstate(all="ignore"):
        return np.where(sign0 == 0, 0.0, np.logaddexp(0.0, 2 * log0))


# --------------------------------------------------------------------------
# symbol conditions

def _poly_condition_ii(p: Poly, k_max: int):
    """Smallest k with |p(x)| >= |x|^(1/k) for |x| >= k.

    ``q = p^(2k) - x^2`` must be >= 0 on both rays ``|x| >= k``: positive at both
    infinities and free of odd-multiplicity roots beyond ``k``, decided with
    exact Sturm counts. Large ``k`` falls back to an explicit root bound.
    """
    d = p.degree
    x = Poly.x()
    inf = float("inf")
    for k in range(1, k_max + 1):
        if 2 * k * d > 24:
            break
        q = p ** (2 * k) - x * x
        if q.is_zero():
            return k, "exact"
        if q.lc <= 0 or q.degree % 2:
            continue
        odd = Poly([1])
        for m, f in yun_decomposition(q):
            if m % 2:
                odd = odd * f
        # counts on (k, inf) and (-inf, -k): a root exactly at -k does not matter
        left = sturm_root_count(odd, -inf, -k) - (odd(-k) == 0) if odd.degree > 0 else 0
        if odd.degree <= 0 or (sturm_root_count(odd, k, inf) == 0 and left == 0):
            return k, "exact"
    if d >= 2:
        # |p| >= |x| beyond every root of p^2 - x^2, and |x| >= |x|^(1/k) for |x| >= 1
        B = math.ceil(max(float(cauchy_bound(p * p - x * x)), 1.0))
        return B, "bound"
    a, b = abs(float(p.coeffs[1])), abs(float(p.coeffs[0]))
    # |ax+b| >= |a||x|/2 >= |x|^(1/2) once |x| >= max(4/a^2, 2|b|/|a|)
    return math.ceil(max(2.0, 4 / a**2, 2 * b / a)), "bound"


def check_symbol_conditions(phi, jmax: int = 3, probe: GridSpec = PROBE_GRID, k_max: int = 64) -> SymbolCheck:
    """Growth condition (i) on derivatives and properness condition (ii).

    Polynomials are decided exactly. Other symbols are checked on the probe:
    (ii) by searching the smallest integer ``k <= k_max`` with
    ``|phi(x)| >= |x|^(1/k)`` at every probe point with ``|x| >= k``; (i) by
    fitting ``|phi^(j)| <= C (1 + phi^2)^p`` with the smallest integer ``p`` whose
    ratio does not grow toward the probe tails.
    """
    if jmax < 1:
        raise ValueError("jmax must be at least 1")
    phi = _coerce(phi)
    p = poly_from_expr(phi) if _is_expr(phi) else None
    if p is not None:
        return _poly_check(p, jmax, probe, k_max)
    xs = probe.probe_points()
    sign, log = _log_jets(phi, xs, jmax)
    notes = []
    # condition (ii)
    lx = np.log(np.abs(xs))
    k_found, cex = None, None
    unresolved = np.isnan(sign[0]) | np.isnan(log[0])
    for k in range(1, k_max + 1):
        m = (np.abs(xs) >= k) & ~unresolved
        with np.errstate(invalid="ignore"):
            ok = (sign[0][m] != 0) & (log[0][m] >= lx[m] / k - 1e-12)
        if np.all(ok):
            k_found = k
            break
        if k == k_max:
            i = np.flatnonzero(m)[np.argmin(ok)]
            cex = {"condition": "ii", "x": float(xs[i]), "k": k, "phi": float(sign[0][i] * np.exp(log[0][i]))}
    cond_ii = HEURISTIC if k_found is not None else FAIL
    # condition (i)
    details, cond_i = [], HEURISTIC
    l1 = _log1p_sq(sign[0], log[0])
    inner = np.abs(xs) <= probe.L
    for j in range(1, jmax + 1):
        fit = None
        for pw in range(1, 9):
            with np.errstate(all="ignore"):
                r = log[j] - pw * l1
            r = np.where(np.isfinite(r), r, -np.inf)
            r_in, r_out = r[inner].max(), r[~inner].max() if np.any(~inner) else -np.inf
            if r_out <= max(r_in, 0.0) + math.log(2.0):
                fit = {"j": j, "p": pw, "C": float(math.exp(max(r_in, r_out)))}
                break
        if fit is None:
            cond_i = FAIL
            i = int(np.argmax(np.where(np.isfinite(log[j]), log[j] - 8 * l1, -np.inf)))
            cex = cex or {"condition": "i", "j": j, "x": float(xs[i])}
            details.append({"j": j, "p": None, "C": None})
        else:
            details.append(fit)
    if probe.tail_max is None:
        notes.append("probe has no log tails; growth fits are local")
    notes.append("non-polynomial symbol: conditions checked numerically on the probe")
    return SymbolCheck(cond_i, cond_ii, details, k_found, cex, notes)


def _poly_check(p: Poly, jmax, probe, k_max):
    if p.degree <= 0:
        c = abs(float(p.coeffs[0])) if p.coeffs else 0.0
        # |x| >= k_max and |x|^(1/k_max) > |c|
        try:
            x = float(max(k_max, (c + 1.0) ** k_max))
        except OverflowError:
            x = math.inf
        cex = {"condition": "ii", "x": x, "k": k_max, "phi": c}
        return SymbolCheck(PASS, FAIL, [], None, cex, ["constant symbol: |phi| is bounded, properness fails"])
    k, how = _poly_condition_ii(p, k_max)
    xs = probe.points()
    v = np.abs(p(xs))
    details = []
    dp = p
    for j in range(1, jmax + 1):
        dp = dp.derivative()
        C = float(np.max(np.abs(dp(xs)) / (1.0 + v**2))) if not dp.is_zero() else 0.0
        details.append({"j": j, "p": 1, "C": C})
    notes = [
        "polynomial symbol: deg phi^(j) <= 2 deg phi, so p = 1 works for every j (C is the probe supremum)",
        f"properness k = {k} found by {'exact Sturm counts' if how == 'exact' else 'a root bound'}",
    ]
    return SymbolCheck(PASS, PASS, details, k, None, notes)


# --------------------------------------------------------------------------
# witnesses

def _iterate_scalar(phi, x, n):
    for _ in range(n):
        x = float(phi(x))
    return x


def _invert_increasing(phi, y, guess):
    """Solve ``phi(t) = y`` for increasing ``phi`` by bracket expansion and brentq."""
    g = lambda t: float(phi(t)) - y
    a = b = guess
    step_ = 1.0
    ga = g(a)
    if ga == 0:
        return a
    for _ in range(200):
        b = a - step_ if ga > 0 else a + step_
        gb = g(b)
        if gb == 0:
            return b
        if (gb > 0) != (ga > 0):
            return brentq(g, min(a, b), max(a, b), xtol=1e-15, rtol=4 * np.finfo(float).eps)
        step_ *= 2
        if not math.isfinite(gb):
            break
    raise ArithmeticError("could not bracket the preimage")


def _bounded_image_backward(phi, k, horizon, M):
    xs = []
    cur = 0.0
    try:
        for n in range(1, horizon + 1):
            cur = _invert_increasing(phi, cur, cur)
            xs.append(cur)
    except (ArithmeticError, ValueError, OverflowError):
        return None
    if not xs:
        return None
    ok = [abs(x) ** k >= n for n, x in enumerate(xs, start=1)]
    # keep the longest valid tail
    n0 = len(ok) + 1
    for i in range(len(ok) - 1, -1, -1):
        if not ok[i]:
            break
        n0 = i + 1
    if n0 > horizon // 2:
        return None
    triples = []
    for n in range(n0, horizon + 1):
        x = xs[n - 1]
        try:
            v = _iterate_scalar(phi, x, n)
        except (ArithmeticError, OverflowError):
            return None
        if not abs(v) <= M:
            return None
        triples.append([n, x, v])
    return Witness("bounded_image_sequence", {"k": k, "M": M, "n0": n0, "triples": triples,
                                              "method": "backward root solving"}, "R5.bounded_image")


def _periodic_points(phi, probe: GridSpec):
    """A fixed point or a 2-cycle point, bracketed on the probe; ``None`` if absent."""
    xs = probe.probe_points()
    cands = []
    if _is_expr(phi):
        p = poly_from_expr(phi)
        if p is not None and p.degree >= 1 and not (p - Poly.x()).is_zero():
            fps = fixed_points(p)
            if fps:
                r = min(fps, key=lambda r: abs(r.estimate))
                return {"period": 1, "lo": float(r.lo), "hi": float(r.hi), "point": r.estimate}
        d = minus_identity(phi)
        vals = signed_values(d, xs)
    else:
        with np.errstate(all="ignore"):
            vals = np.asarray(phi(xs)) - xs
    cands.append((1, vals))
    with np.errstate(all="ignore"):
        v2 = np.asarray(phi(np.asarray(phi(xs)))) - xs
    cands.append((2, v2))
    for period, v in cands:
        s = np.sign(v)
        z = np.flatnonzero(s == 0)
        if z.size:
            i = z[np.argmin(np.abs(xs[z]))]
            return {"period": period, "lo": float(xs[i]), "hi": float(xs[i]), "point": float(xs[i])}
        ch = np.flatnonzero(s[:-1] * s[1:] < 0)
        if ch.size:
            i = ch[np.argmin(np.abs(xs[ch]))]
            return {"period": period, "lo": float(xs[i]), "hi": float(xs[i + 1]),
                    "point": float(0.5 * (xs[i] + xs[i + 1]))}
    return None


def _expansion_radius(phi, probe: GridSpec, factor=1.5):
    """Smallest probe radius K beyond which |phi(t)| >= factor |t| at every probe point."""
    xs = probe.probe_points()
    with np.errstate(all="ignore"):
        v = np.abs(np.asarray(phi(xs)))
    good = (v >= factor * np.abs(xs)) | np.isinf(v)
    r = np.abs(xs)
    bad_r = r[~good]
    K = float(bad_r.max()) if bad_r.size else 0.0
    nxt = r[r > K]
    if nxt.size == 0 or K >= probe.L:
        return None
    return float(nxt.min())


def _bounded_orbit_witness(phi, probe):
    per = _periodic_points(phi, probe)
    if per is None:
        return None
    K = _expansion_radius(phi, probe)
    if K is None:
        return None
    return Witness("bounded_orbit_plus_divergence",
                   {"periodic_point": per, "K": K, "expansion_factor": 1.5,
                    "probe_L": probe.L, "probe_tail_max": probe.tail_max},
                   "R5.bounded_orbit")


def _bounded_image_grid(phi, k, horizon, M, probe):
    xs = probe.probe_points()
    J = Jet.variable(xs, 0)
    triples = {}
    ax = np.abs(xs)
    for n in range(1, horizon + 1):
        J = step(phi, J)
        v = np.asarray(J.value, dtype=float)
        m = (np.abs(v) <= M) & (ax**k >= n)
        if np.any(m):
            i = np.flatnonzero(m)[np.argmax(ax[m])]
            triples[n] = [n, float(xs[i]), float(v[i])]
    if not triples:
        return None
    n0 = horizon + 1
    for n in range(horizon, 0, -1):
        if n not in triples:
            break
        n0 = n
    if n0 > horizon // 2:
        return None
    return Witness("bounded_image_sequence", {"k": k, "M": M, "n0": n0,
                                              "triples": [triples[n] for n in range(n0, horizon + 1)],
                                              "method": "grid search"}, "R5.bounded_image")


def non_me_witness(phi, k: int = 2, horizon: int = 200, M: float = 1.0, probe: GridSpec = PROBE_GRID):
    """Search for evidence that ``C_phi`` is not mean ergodic.

    Tries, in order: backward root solving of ``phi_n(x_n) = 0`` for increasing
    symbols, a bounded periodic orbit together with expansion
    ``|phi(t)| >= 1.5|t|`` beyond some radius, and a grid search for points with
    ``|x|^k >= n`` and ``|phi_n(x)| <= M``. Every returned witness re-validates.
    """
    if horizon > 10_000:
        raise ValueError("horizon must be at most 10^4")
    phi = _coerce(phi)
    mono = monotonicity_classify(phi, probe)
    found = []
    if mono is Monotonicity.INCREASING:
        found.append(lambda: _bounded_image_backward(phi, k, horizon, M))
    found.append(lambda: _bounded_orbit_witness(phi, probe))
    found.append(lambda: _bounded_image_grid(phi, k, horizon, M, probe))
    for attempt in found:
        try:
            w = attempt()
        except (DomainError, ArithmeticError, OverflowError):
            w = None
        if w is not None and validate_witness(phi, w):
            return w
    return None


def validate_witness(phi, w: Witness) -> bool:
    """Replay the stored data against the inequality of the witness's rule."""
    phi = _coerce(phi)
    d = w.data
    try:
        if w.kind == "bounded_image_sequence":
            for n, x, _ in d["triples"]:
                if abs(x) ** d["k"] < n:
                    return False
                if not abs(_iterate_scalar(phi, x, n)) <= d["M"]:
                    return False
            return bool(d["triples"])
        if w.kind == "bounded_orbit_plus_divergence":
            per = d["periodic_point"]
            g = (lambda t: float(phi(t)) - t) if per["period"] == 1 else (lambda t: float(phi(float(phi(t)))) - t)
            lo, hi = per["lo"], per["hi"]
            if lo == hi:
                if g(lo) != 0:
                    return False
            elif not (g(lo) == 0 or g(hi) == 0 or (g(lo) > 0) != (g(hi) > 0)):
                return False
            K, c = d["K"], d["expansion_factor"]
            hi_r = d.get("probe_tail_max") or 10 * max(K, 1.0)
            r = np.geomspace(max(K, 1e-12), max(hi_r, K * 10), 4001)
            ts = np.concatenate([-r, r])
            with np.errstate(all="ignore"):
                v = np.abs(np.asarray(phi(ts)))
            return bool(np.all((v >= c * np.abs(ts)) | np.isinf(v)))
        if w.kind == "displaced_symbol":
            ts = np.asarray(d["samples"], dtype=float)
            v = _displacement(phi, ts) * d["side"]
            return bool(np.all(v >= d["delta"]))
        if w.kind == "involution_failure":
            x = d["x"]
            return abs(float(phi(float(phi(x)))) - x) > d["tol"] * (1 + abs(x))
        if w.kind == "fixed_point_non_identity":
            t = d["moved_point"]
            if float(phi(t)) == t:
                return False
            lo, hi = d["lo"], d["hi"]
            if "exact" in d.get("method", ""):
                return True
            g = _displacement(phi, np.array([lo, hi]))
            return bool(g[0] == 0 or g[1] == 0 or (g[0] > 0) != (g[1] > 0))
    except (DomainError, ArithmeticError, OverflowError):
        return False
    return False


def _displacement(phi, ts):
    if _is_expr(phi):
        return signed_values(minus_identity(phi), ts)
    with np.errstate(all="ignore"):
        return np.asarray(phi(ts)) - ts


# --------------------------------------------------------------------------
# uniform power-boundedness probe

@dataclass
class ProbeResult:
    status: str
    n: Optional[int] = None
    j: Optional[int] = None
    x: Optional[float] = None
    k: Optional[int] = None
    p: dict = field(default_factory=dict)
    C: dict = field(default_factory=dict)
    log_mode: bool = False
    unresolved_points: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.status == "consistent"

    def to_dict(self):
        return asdict(self)


def uniform_pb_probe(phi, N: int = 100, jmax: int = 3, probe: GridSpec = PROBE_GRID, k_max: int = 64) -> ProbeResult:
    """Heuristic check of the uniform symbol conditions across iterates ``phi_n``, n <= N.

    (ii): one ``k <= k_max`` with ``|phi_n(x)| >= |x|^(1/k)`` for all ``n`` and all
    probe ``|x| >= k``. (i): per ``j``, the smallest integer ``p <= 8`` such that
    ``log C_n = max_x log(|phi_n^(j)| / (1+phi_n^2)^p)`` does not grow: the max
    over the second half of ``n`` stays within ``log 2`` of the first half.
    ``consistent`` is evidence, not proof.
    """
    if N > 200:
        raise ValueError("probe horizon must be at most 200")
    phi = _coerce(phi)
    xs = probe.probe_points()
    lx = np.log(np.abs(xs))
    ax = np.abs(xs)
    ks = np.arange(1, k_max + 1)
    # smallest admissible k per point: need log|phi_n| >= log|x| / k wherever |x| >= k
    k_ok = np.ones(k_max, dtype=bool)
    first_bad = {}
    logC = np.full((jmax + 1, 8, N), -np.inf)
    argx = np.zeros((jmax + 1, 8, N))
    log_mode = False
    unresolved = np.zeros(xs.shape, dtype=bool)
    J = Jet.variable(xs, jmax)
    for n in range(1, N + 1):
        try:
            J = step(phi, J)
        except DomainError as exc:
            return ProbeResult("violated", n, 0, exc.x, notes=[f"domain violation: {exc}"])
        if J.is_log:
            log_mode = True
            sign, log = J.sign, J.log
        else:
            d = J.derivs
            with np.errstate(divide="ignore"):
                sign, log = np.sign(d), np.log(np.abs(d))
        bad_pt = np.isnan(sign).any(axis=0) | np.isnan(log).any(axis=0) | np.isposinf(log[0])
        unresolved |= bad_pt
        good = ~bad_pt
        with np.errstate(invalid="ignore"):
            viol = good[None, :] & (ax[None, :] >= ks[:, None]) & (
                (sign[0][None, :] == 0) | (log[0][None, :] < lx[None, :] / ks[:, None] - 1e-12))
        newly = k_ok & viol.any(axis=1)
        for kk in np.flatnonzero(newly):
            i = int(np.flatnonzero(viol[kk])[0])
            first_bad[kk + 1] = (n, float(xs[i]))
        k_ok &= ~viol.any(axis=1)
        l1 = _log1p_sq(sign[0], log[0])
        for j in range(1, jmax + 1):
            for pw in range(1, 9):
                with np.errstate(all="ignore"):
                    r = log[j] - pw * l1
                r = np.where(good & np.isfinite(r), r, -np.inf)
                i = int(np.argmax(r))
                logC[j, pw - 1, n - 1] = r[i]
                argx[j, pw - 1, n - 1] = xs[i]
    notes = []
    if unresolved.any():
        notes.append(f"{int(unresolved.sum())} probe points beyond log range were skipped")
    if not k_ok.any():
        n, x = first_bad[k_max]
        return ProbeResult("violated", n, 0, x, None, log_mode=log_mode,
                           unresolved_points=int(unresolved.sum()),
                           notes=notes + [f"uniform properness fails for every k <= {k_max}"])
    k = int(np.flatnonzero(k_ok)[0]) + 1
    half = max(1, N // 2)
    p_found, C_found = {}, {}
    for j in range(1, jmax + 1):
        for pw in range(1, 9):
            row = logC[j, pw - 1]
            first, second = row[:half].max(), row[half:].max() if N > half else -np.inf
            if second <= first + math.log(2.0):
                p_found[j] = pw
                C_found[j] = float(math.exp(min(max(first, second), 700.0)))
                break
        else:
            row = logC[j, 7]
            n = half + int(np.argmax(row[half:])) + 1
            return ProbeResult("violated", n, j, float(argx[j, 7, n - 1]), k, p_found, C_found,
                               log_mode, int(unresolved.sum()),
                               notes + [f"derivative order {j} outgrows (1+phi_n^2)^p for p <= 8"])
    return ProbeResult("consistent", None, None, None, k, p_found, C_found, log_mode,
                       int(unresolved.sum()), notes)


# --------------------------------------------------------------------------
# classification cascade

def _verdict(report, pb, me):
    report.power_bounded = pb
    report.mean_ergodic = me
    report.uniformly_mean_ergodic = me
    return report


def classify(phi, cfg: ClassifierConfig = None) -> ClassificationReport:
    """Verdicts on power boundedness and (uniform) mean ergodicity of ``C_phi``.

    >>> classify("x^2+1").power_bounded
    'yes'
    """
    cfg = cfg or ClassifierConfig()
    phi = _coerce(phi)
    text = phi.text
    check = check_symbol_conditions(phi, cfg.jmax, cfg.probe, cfg.k_max)
    if check.failed:
        which = [c for c, v in (("(i) derivative growth", check.condition_i),
                                ("(ii) properness |phi(x)| >= |x|^(1/k)", check.condition_ii)) if v == FAIL]
        raise PreconditionError(f"{text} is not a symbol for the Schwartz space (counterexample {check.counterexample})",
                                "symbol condition " + " and ".join(which))
    rep = ClassificationReport(text, check, {"kind": "general"}, UNKNOWN, UNKNOWN, UNKNOWN,
                               notes=[SUPERCYCLIC_NOTE, SEMINORM_NOTE])
    p = poly_from_expr(phi) if _is_expr(phi) else None
    if p is not None and p.degree == 1:
        return _classify_affine(phi, p, rep, cfg)
    if p is not None:
        return _classify_poly(phi, p, rep)
    mono = monotonicity_classify(phi, cfg.probe)
    if mono is Monotonicity.INCREASING:
        rep.shape = {"kind": "monotone", "direction": mono.value}
        return _classify_increasing(phi, rep, cfg)
    if mono is Monotonicity.DECREASING:
        rep.shape = {"kind": "monotone", "direction": mono.value}
        return _classify_decreasing(phi, rep, cfg)
    rep.diagnostics["monotonicity"] = mono.value
    return _classify_general(phi, rep, cfg)


def _classify_affine(phi, p, rep, cfg):
    b, a = p.coeffs[0] if len(p.coeffs) > 1 else Fraction(0), p.coeffs[-1]
    rep.shape = {"kind": "affine", "a": float(a), "b": float(b)}
    rep.rules_fired.append(_rule("R1.affine"))
    rep.rules_fired.append(_rule("R1.monotone" if a > 0 else "R1.decreasing"))
    ok = (a == 1 and b == 0) or a == -1
    if ok:
        rep.rules_fired.append(_rule("FM"))
        return _verdict(rep, YES, YES)
    w = non_me_witness(phi, cfg.witness_k, cfg.horizon, cfg.bound_M, cfg.probe)
    if w is not None:
        rep.witnesses.append(w)
    return _verdict(rep, NO, NO)


def _classify_poly(phi, p, rep):
    fps = fixed_points(p)
    rep.shape = {"kind": "polynomial", "degree": p.degree, "fixed_point_count": len(fps)}
    rep.diagnostics["fixed_points"] = [
        {"lo": str(r.lo), "hi": str(r.hi), "estimate": r.estimate, "multiplicity_hint": r.multiplicity_hint}
        for r in fps
    ]
    if p.degree % 2 == 0 and not fps:
        rep.rules_fired += [_rule("R2.even_no_fixed_points"), _rule("FM")]
        return _verdict(rep, YES, YES)
    rep.rules_fired.append(_rule("R2.odd_degree" if p.degree % 2 else "R2.fixed_point"))
    r = min(fps, key=lambda r: abs(r.estimate))
    moved = _moved_point(phi)
    rep.witnesses.append(Witness("fixed_point_non_identity",
                                 {"lo": float(r.lo), "hi": float(r.hi), "estimate": r.estimate,
                                  "multiplicity_hint": r.multiplicity_hint, "moved_point": moved,
                                  "method": "exact Sturm isolation"}, rep.rules_fired[-1]["id"]))
    return _verdict(rep, NO, NO)


def _moved_point(phi):
    for t in (0.0, 1.0, -1.0, 0.5, 2.0, -2.0, 3.0):
        try:
            if float(phi(t)) != t:
                return t
        except DomainError:
            continue
    return 0.0


def _classify_increasing(phi, rep, cfg):
    xs = cfg.probe.probe_points()
    d = _displacement(phi, xs)
    if np.all(d == 0):
        rep.rules_fired += [_rule("R3.identity"), _rule("FM")]
        return _verdict(rep, YES, YES)
    rep.caveats.append(TANGENT_CAVEAT)
    s = np.sign(d)
    zero = np.flatnonzero(s == 0)
    change = np.flatnonzero(s[:-1] * s[1:] < 0)
    if zero.size or change.size:
        if zero.size:
            i = zero[np.argmin(np.abs(xs[zero]))]
            lo = hi = float(xs[i])
        else:
            i = change[np.argmin(np.abs(xs[change]))]
            lo, hi = float(xs[i]), float(xs[i + 1])
        moved = float(xs[np.flatnonzero(s != 0)[0]])
        rep.rules_fired.append(_rule("R3.fixed_point"))
        rep.witnesses.append(Witness("fixed_point_non_identity",
                                     {"lo": lo, "hi": hi, "moved_point": moved, "method": "probe sign change"},
                                     "R3.fixed_point"))
        return _verdict(rep, NO, NO)
    side = 1.0 if s[0] > 0 else -1.0
    # phi > x: orbits run right, the left tail matters; phi < x: the right tail
    tail = -np.geomspace(cfg.tail_lo, cfg.tail_hi, 2049) if side > 0 else np.geomspace(cfg.tail_lo, cfg.tail_hi, 2049)
    disp = _displacement(phi, tail) * side
    rep.diagnostics["tail_displacement_inf"] = float(disp.min())
    if disp.min() >= cfg.delta_min:
        rep.rules_fired.append(_rule("R3.displaced"))
        rep.witnesses.append(Witness("displaced_symbol",
                                     {"delta": float(cfg.delta_min), "side": side, "tail": "left" if side > 0 else "right",
                                      "samples": tail[:: 64].tolist()}, "R3.displaced"))
        w = non_me_witness(phi, cfg.witness_k, cfg.horizon, cfg.bound_M, cfg.probe)
        if w is not None:
            rep.witnesses.append(w)
        return _verdict(rep, NO, NO)
    rep.rules_fired.append(_rule("R3.open_case"))
    return _verdict(rep, UNKNOWN, UNKNOWN)


def _classify_decreasing(phi, rep, cfg):
    xs = cfg.probe.probe_points()
    with np.errstate(all="ignore"):
        back = np.asarray(phi(np.asarray(phi(xs))), dtype=float)
    rel = np.abs(back - xs) / (1 + np.abs(xs))
    rel = np.where(np.isfinite(rel), rel, np.inf)
    worst = int(np.argmax(rel))
    rep.diagnostics["involution_residual"] = float(rel[worst])
    if rel[worst] <= cfg.tol_involution:
        rep.rules_fired += [_rule("R4.involution"), _rule("FM")]
        return _verdict(rep, YES, YES)
    rep.rules_fired.append(_rule("R4.not_involution"))
    rep.witnesses.append(Witness("involution_failure",
                                 {"x": float(xs[worst]), "residual": float(rel[worst]), "tol": cfg.tol_involution},
                                 "R4.not_involution"))
    return _verdict(rep, NO, NO)


def _classify_general(phi, rep, cfg):
    w = non_me_witness(phi, cfg.witness_k, cfg.horizon, cfg.bound_M, cfg.probe)
    if cfg.run_probe:
        try:
            rep.diagnostics["uniform_probe"] = uniform_pb_probe(phi, cfg.N, cfg.jmax, cfg.probe, cfg.k_max).to_dict()
        except (DomainError, ArithmeticError) as exc:
            rep.diagnostics["uniform_probe"] = {"status": "error", "message": str(exc)}
    if w is None:
        rep.rules_fired.append(_rule("R5.no_witness"))
        return _verdict(rep, UNKNOWN, UNKNOWN)
    rep.witnesses.append(w)
    rep.rules_fired.append(_rule(w.rule_ref))
    return _verdict(rep, NO, NO)
