"""Command-line front end: ``compop <command> ...``.

Every command builds a run report (command, inputs, outputs, citations,
timing, versions). ``--json`` prints it, ``--out`` writes it, ``--csv`` writes
plot-ready samples of the grid function a command produces.

Exit codes: 0 success, 2 violated hypothesis, 1 anything else.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .classifier import ClassifierConfig, check_symbol_conditions, classify
from .dynamics import cesaro_mean, cesaro_seminorm, orbit_seminorm_profile, phi_star
from .errors import ParseError, PreconditionError
from .grid import DEFAULT_GRID, PROBE_GRID, parse_grid
from .involution import InvolutionSymbol
from .schwartz import make_builtin
from .spectral import (
    dilation_nonsurjectivity_witness,
    eigenfunction_sqrt,
    injective_point_spectrum,
    neumann_resolvent,
    power_bounded_resolvent,
    translation_spectrum_witness,
    zak_fourier,
    zak_transform,
)
from .symbols import parse_symbol

SCHEMA_VERSION = "1.0"
COMMANDS = (
    "classify", "symbol-check", "orbit", "cesaro", "phistar", "eigen-sqrt", "resolvent",
    "zak", "translation-witness", "dilation-witness", "point-spectrum", "involution",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for violated hypotheses here
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# argument types

def parse_complex(text: str) -> complex:
    """``a+bi`` syntax: ``0.5``, ``-0.5``, ``0.7i``, ``0.3+0.4i``, ``-i``."""
    t = text.strip().replace(" ", "").lower()
    if not t:
        raise argparse.ArgumentTypeError("empty complex number")
    if "i" not in t:
        return complex(parse_real(t))
    try:
        return complex(t.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad complex number {text!r}; use a+bi")


def parse_real(text: str) -> float:
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad number {text!r}")


def parse_interval(text: str):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"bad interval {text!r}; use lo:hi")
    a, b = parse_real(lo), parse_real(hi)
    if not a < b:
        raise argparse.ArgumentTypeError(f"empty interval {text!r}")
    return a, b


def _grid(text):
    try:
        return parse_grid(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def load_symbol(text: str):
    """A grammar expression, or ``involution[f]`` for the implicit involution built from ``f``."""
    t = text.strip()
    if t.startswith("involution[") and t.endswith("]"):
        return InvolutionSymbol(parse_symbol(t[len("involution["):-1]))
    return parse_symbol(t)


# --------------------------------------------------------------------------
# JSON

def to_jsonable(obj):
    """Recursively convert to plain JSON values; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": to_jsonable(float(obj.real)), "im": to_jsonable(float(obj.imag))}
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    return str(obj)


def dumps(report: dict) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, allow_nan=False, ensure_ascii=False)


def load_schema() -> dict:
    from importlib.resources import files

    return json.loads(files("compop").joinpath("schema/run_report.schema.json").read_text())


# --------------------------------------------------------------------------
# commands: each returns (outputs, citations, csv_rows)

def _ids(rules):
    return [r["id"] for r in rules]


def cmd_classify(a):
    cfg = ClassifierConfig(horizon=a.horizon, run_probe=not a.no_probe)
    if a.grid:
        cfg.probe = a.grid
    rep = classify(load_symbol(a.symbol), cfg)
    return rep.to_dict(), _ids(rep.rules_fired), None


def cmd_symbol_check(a):
    chk = check_symbol_conditions(load_symbol(a.symbol), jmax=a.jmax, probe=a.grid or PROBE_GRID)
    return chk.to_dict(), [], None


def cmd_orbit(a):
    f = make_builtin(a.f)
    prof = orbit_seminorm_profile(load_symbol(a.symbol), f, a.seminorm, a.horizon, a.grid or DEFAULT_GRID)
    rows = [("n", "seminorm")] + [(k + 1, v) for k, v in enumerate(prof.values)]
    out = prof.to_dict()
    out["seminorm_index"] = a.seminorm
    return out, [], rows


def cmd_cesaro(a):
    phi, f, grid = load_symbol(a.symbol), make_builtin(a.f), a.grid or DEFAULT_GRID
    res = cesaro_mean(phi, f, a.horizon, grid, seminorm_index=a.seminorm)
    out = res.to_dict()
    if a.refined:
        out["refined_seminorm"] = cesaro_seminorm(phi, f, a.horizon, a.seminorm, grid).to_dict()
    rows = [("x", "re", "im")] + [(x, complex(v).real, complex(v).imag) for x, v in zip(res.x, res.values)]
    return out, [], rows


def cmd_phistar(a):
    phi = load_symbol(a.symbol)
    xs = a.x or [0.0]
    vals = [phi_star(phi, x, N=a.horizon) for x in xs]
    return {"x": xs, "phi_star": vals}, [], [("x", "phi_star")] + list(zip(xs, vals))


def cmd_eigen_sqrt(a):
    psi = make_builtin(a.psi) if a.psi else None
    res = eigenfunction_sqrt(a.lam, psi, a.depth)
    out = res.to_dict()
    out["passes"] = res.passes
    rows = None
    if a.csv:
        reach = max((p.hi for p in res.f.pieces), default=1.0) + 0.5
        xs = np.linspace(-reach, reach, 4001)
        rows = [("x", "re", "im")] + [(x, v.real, v.imag) for x, v in zip(xs, res.f(xs))]
    return out, _ids(res.citations), rows


def cmd_resolvent(a):
    phi, g, grid = load_symbol(a.symbol), make_builtin(a.f), a.grid or DEFAULT_GRID
    lam = a.lam
    if abs(abs(lam) - 1) <= 1e-12:
        res = power_bounded_resolvent(phi, lam, g, p=a.p, trunc=a.horizon, grid=grid)
        method = "power_bounded"
    else:
        res = neumann_resolvent(phi, lam, g, trunc=a.horizon, grid=grid)
        method = "neumann"
    out = res.to_dict()
    out["method"] = method
    rows = [("x", "re", "im")] + [(x, v.real, v.imag) for x, v in zip(res.x, res.values)]
    return out, _ids(res.citations), rows


def cmd_zak(a):
    f = make_builtin(a.f)
    z = zak_transform(f, a.x, a.omega, a.K)
    out = {"value": complex(z.value), "error": float(z.error), "K": z.K}
    if a.fourier:
        out["fourier_integral"] = complex(zak_fourier(f, a.omega)[0])
    return out, ["S.zak"], None


def cmd_translation_witness(a):
    w = translation_spectrum_witness(make_builtin(a.f), a.omega)
    return w.to_dict(), _ids(w.citations), None


def cmd_dilation_witness(a):
    w = dilation_nonsurjectivity_witness(a.a, a.lam, a.jmax, a.mmax)
    return w.to_dict(), _ids(w.citations), None


def cmd_point_spectrum(a):
    rep = injective_point_spectrum(load_symbol(a.symbol), a.grid or PROBE_GRID)
    return rep.to_dict(), _ids(rep.rules_fired), None


def cmd_involution(a):
    phi = InvolutionSymbol(parse_symbol(a.f))
    xs = np.asarray(a.x if a.x else (a.grid or DEFAULT_GRID).points(), dtype=float)
    y = np.atleast_1d(phi(xs))
    back = np.atleast_1d(phi(y))
    slope = phi.jet(xs, 1).derivs[1]
    out = {
        "f": a.f,
        "a": phi.a,
        "max_involution_error": float(np.max(np.abs(back - xs) / (1 + np.abs(xs)))),
        "slope_range": [float(slope.min()), float(slope.max())],
        "slope_bound": -2 / (1 - phi.a),
    }
    if a.x:
        out["x"] = xs
        out["phi"] = y
    return out, ["R4.involution"], [("x", "phi")] + list(zip(xs, y))


HANDLERS = {
    "classify": cmd_classify,
    "symbol-check": cmd_symbol_check,
    "orbit": cmd_orbit,
    "cesaro": cmd_cesaro,
    "phistar": cmd_phistar,
    "eigen-sqrt": cmd_eigen_sqrt,
    "resolvent": cmd_resolvent,
    "zak": cmd_zak,
    "translation-witness": cmd_translation_witness,
    "dilation-witness": cmd_dilation_witness,
    "point-spectrum": cmd_point_spectrum,
    "involution": cmd_involution,
}


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report instead of a table")
    common.add_argument("--out", metavar="PATH", help="write the JSON report to PATH")
    common.add_argument("--csv", metavar="PATH", help="write sampled grid data to PATH")
    common.add_argument("--grid", type=_grid, metavar="L:N", help="grid half-width and point count")

    p = _Parser(prog="compop", description="Composition operators on the Schwartz space.")
    p.add_argument("--version", action="version", version=f"compop {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text, symbol=True):
        s = sub.add_parser(name, parents=[common], help=help_text)
        if symbol:
            s.add_argument("symbol", help="symbol expression in x, e.g. 'x^2+1' or 'involution[cos(x)/2]'")
        return s

    s = add("classify", "power boundedness and mean ergodicity verdicts")
    s.add_argument("--horizon", type=int, default=200, help="witness search horizon (default 200)")
    s.add_argument("--no-probe", action="store_true", help="skip the numeric uniform probe")

    s = add("symbol-check", "check the two symbol conditions")
    s.add_argument("--jmax", type=int, default=3)

    s = add("orbit", "seminorm profile of C_phi^n f")
    s.add_argument("--f", default="gaussian", help="test function (gaussian, bump:a:b, hermite:k, ...)")
    s.add_argument("--seminorm", type=int, default=3)
    s.add_argument("--horizon", type=int, default=100)

    s = add("cesaro", "Cesaro means of the orbit of f")
    s.add_argument("--f", default="gaussian")
    s.add_argument("--seminorm", type=int, default=1)
    s.add_argument("--horizon", type=int, default=200)
    s.add_argument("--refined", action="store_true", help="also compute the refined seminorm of the final mean")

    s = add("phistar", "limit of the orbit of x for an increasing symbol")
    s.add_argument("--x", type=parse_real, action="append")
    s.add_argument("--horizon", type=int, default=10_000)

    s = add("eigen-sqrt", "eigenfunction of sqrt(x^2+1) for |lambda| < 1", symbol=False)
    s.add_argument("--lambda", dest="lam", type=parse_complex, required=True)
    s.add_argument("--depth", type=int, default=None)
    s.add_argument("--psi", default=None, help="bump supported in [1/4, 1/2] (default bump:1/4:1/2)")

    s = add("resolvent", "resolvent series at lambda (|lambda| > 1, or |lambda| = 1 with decay)")
    s.add_argument("--lambda", dest="lam", type=parse_complex, required=True)
    s.add_argument("--f", default="gaussian")
    s.add_argument("--horizon", type=int, default=60, help="truncation N")
    s.add_argument("--p", type=float, default=3.0, help="decay power on the unit circle")

    s = add("zak", "Zak transform of a test function", symbol=False)
    s.add_argument("--f", default="gaussian")
    s.add_argument("--x", type=parse_real, default=0.0)
    s.add_argument("--omega", type=parse_real, default=0.0)
    s.add_argument("--K", type=int, default=None)
    s.add_argument("--fourier", action="store_true", help="also integrate over x against e^{-2 pi i x w}")

    s = add("translation-witness", "certify e^{2 pi i w} in the spectrum of x+1", symbol=False)
    s.add_argument("--f", default="gaussian")
    s.add_argument("--omega", type=parse_real, default=0.0)

    s = add("dilation-witness", "non-surjectivity of C_phi - lambda for phi = a x", symbol=False)
    s.add_argument("--a", type=parse_real, required=True)
    s.add_argument("--lambda", dest="lam", type=parse_complex, required=True)
    s.add_argument("--jmax", type=int, default=8)
    s.add_argument("--mmax", type=int, default=30)

    add("point-spectrum", "point spectrum of an injective symbol")

    s = add("involution", "decreasing involution from x + y = f(x - y)", symbol=False)
    s.add_argument("f", help="even expression with sup|f'| < 1")
    s.add_argument("--x", type=parse_real, action="append")
    return p


def _inputs(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("json", "out", "csv", "command"):
            continue
        if k == "grid" and v is not None:
            v = {"L": v.L, "N": v.N}
        out["lambda" if k == "lam" else k] = v.strip() if isinstance(v, str) else v
    return out


def format_table(report: dict) -> str:
    lines = [f"command : {report['command']}"]
    for k, v in sorted(report["inputs"].items()):
        if v is not None and v is not False:
            lines.append(f"  {k:<14}{_short(v)}")
    lines.append("outputs")
    for k, v in sorted(report["outputs"].items()):
        lines.append(f"  {k:<26}{_short(v)}")
    if report["citations"]:
        lines.append("citations : " + ", ".join(report["citations"]))
    lines.append(f"time : {report['timing_ms']:.1f} ms")
    return "\n".join(lines)


def _short(v):
    v = to_jsonable(v)
    if isinstance(v, dict) and set(v) == {"re", "im"} and all(isinstance(x, float) for x in v.values()):
        return f"{complex(v['re'], v['im']):.12g}".replace("j", "i")
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, list) and len(v) > 6:
        return f"[{len(v)} entries] first {_short(v[:3])[1:-1]} ... last {_short(v[-1])}"
    if isinstance(v, list):
        return "[" + ", ".join(_short(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_short(x)}" for k, x in sorted(v.items())) + "}"
    return str(v)


def _write_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(rows[0])
        for r in rows[1:]:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])


def run(argv=None, stdout=None, stderr=None):
    """Run one command; returns ``(exit_code, report or None)``."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # '-x+3' or '-0.5' would be taken for a flag; all real flags are '--' or '-h'
    argv = [" " + t if t[:1] == "-" and t[:2] != "--" and t != "-h" else t for t in argv]
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 1, None
    t0 = time.perf_counter()
    try:
        outputs, citations, rows = HANDLERS[args.command](args)
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=stderr)
        return 2, None
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return 1, None
    except Exception as exc:  # reported, not raised: the CLI contract is an exit code
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 1, None
    report = {
        "command": args.command,
        "inputs": _inputs(args),
        "outputs": outputs,
        "citations": sorted(set(citations)),
        "timing_ms": (time.perf_counter() - t0) * 1e3,
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
    }
    report = to_jsonable(report)
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.csv and rows:
        _write_csv(args.csv, rows)
    print(text if args.json else format_table(report), file=stdout)
    return 0, report


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
