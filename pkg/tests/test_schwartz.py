import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from compop.grid import GridSpec, parse_grid
from compop.monotone import Monotonicity, monotonicity_classify
from compop.schwartz import bump, gaussian, gaussian_fourier, hermite, make_builtin, odd_gaussian, plateau, zero_fn
from compop.symbols import parse_symbol
from oracles import fd_jet, mp_schwartz

BUILTINS = ["gaussian", "odd_gaussian", "hermite:0", "hermite:3", "bump:-1/2:1/2", "bump:1/4:1/2", "plateau:1:2"]


def test_examples():
    assert bump(-0.5, 0.5)(0.0) == 1.0
    p = plateau(1, 2)
    assert p(0.5) == 1.0 and p(2.5) == 0.0 and p(-2.5) == 0.0
    assert gaussian()(0.0) == 1.0


def test_bump_support_and_flat_edges():
    b = bump(0.25, 0.5)
    assert b(0.25) == 0.0 and b(0.5) == 0.0 and b(0.2) == 0.0 and b(0.6) == 0.0
    near = np.abs(b.jet(np.array([0.25 + 1e-3, 0.5 - 1e-3]), 4))
    nearer = np.abs(b.jet(np.array([0.25 + 5e-4, 0.5 - 5e-4]), 4))
    assert np.all(near < 1e-7) and np.all(nearer < 1e-6 * near)


def test_plateau_is_monotone_between_levels():
    xs = np.linspace(1, 2, 2001)
    v = plateau(1, 2)(xs)
    assert np.all(np.diff(v) <= 1e-15) and v[0] == 1.0 and v[-1] == 0.0


@pytest.mark.parametrize("k", range(6))
def test_hermite_against_numpy(k):
    xs = np.linspace(-3, 3, 61)
    c = np.zeros(k + 1)
    c[k] = 1
    ref = np.polynomial.hermite.hermval(xs, c) * np.exp(-np.pi * xs**2)
    assert np.allclose(hermite(k)(xs), ref, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("w", [0.0, 0.3, 1.0, 1.7])
def test_gaussian_is_self_dual(w):
    re = integrate.quad(lambda x: math.exp(-math.pi * x * x) * math.cos(2 * math.pi * x * w), -12, 12, limit=200)[0]
    assert re == pytest.approx(float(gaussian_fourier(w)), abs=1e-10)


@pytest.mark.parametrize("name", BUILTINS)
def test_builtin_jets_against_finite_differences(name):
    f = make_builtin(name)
    rng = np.random.default_rng(11)
    lo, hi = (-2.0, 2.0) if f.decay.kind == "gaussian" else (f.decay.support[0], f.decay.support[1])
    for x in rng.uniform(lo, hi, 12):
        got = f.jet(np.array([x]), 4)[:, 0]
        ref = fd_jet(mp_schwartz(f), x, 4)
        for a, b in zip(got, ref):
            assert abs(a - b) <= 1e-6 * (1 + abs(b))


def _gauss_derivs(xs, n):
    # d^j/dx^j exp(-pi x^2) = (-sqrt(pi))^j H_j(sqrt(pi) x) exp(-pi x^2)
    out = []
    for j in range(n + 1):
        c = np.zeros(j + 1)
        c[j] = 1
        out.append((-math.sqrt(math.pi)) ** j * np.polynomial.hermite.hermval(math.sqrt(math.pi) * xs, c)
                   * np.exp(-math.pi * xs**2))
    return out


@pytest.mark.parametrize("n", range(0, 9))
@pytest.mark.parametrize("L", [2.0, 5.0, 30.0])
def test_gaussian_tail_bound_is_a_majorant(n, L):
    xs = np.linspace(L, 3 * L, 20001)
    d = _gauss_derivs(xs, n)
    sampled = max(float(np.max((1 + xs**2) ** n * np.abs(dj))) for dj in d)
    assert sampled <= gaussian().tail_bound(n, L) * (1 + 1e-12)


def test_zero_and_errors():
    assert zero_fn()(np.array([1.0, 2.0])).tolist() == [0.0, 0.0]
    with pytest.raises(ValueError):
        make_builtin("bump:1:0")
    with pytest.raises(ValueError):
        make_builtin("plateau:2:1")
    with pytest.raises(ValueError):
        make_builtin("triangle")


def test_odd_gaussian_is_odd():
    xs = np.linspace(-3, 3, 31)
    assert np.array_equal(odd_gaussian()(xs), -odd_gaussian()(-xs))


@given(st.floats(0.5, 1.5), st.floats(0.1, 1.0))
def test_scaling_is_linear(c, x):
    g = gaussian()
    assert g.scaled(c)(x) == pytest.approx(c * g(x), rel=1e-15)


# ---- grids

def test_grid_validation_and_parsing():
    g = parse_grid("30:4096")
    assert (g.L, g.N) == (30.0, 4096)
    pts = g.points()
    assert pts[0] == -30 and pts[-1] == 30 and pts.size == 4096
    with pytest.raises(ValueError):
        GridSpec(L=-1)
    with pytest.raises(ValueError):
        GridSpec(N=10)
    with pytest.raises(ValueError):
        parse_grid("30")


# ---- monotonicity

@pytest.mark.parametrize("text,want", [
    ("x+1", Monotonicity.INCREASING),
    ("-x^3-x", Monotonicity.DECREASING),
    ("x^2+1", Monotonicity.NON_MONOTONE),
    ("x^3", Monotonicity.INCREASING),
    ("exp(x)", Monotonicity.INCREASING),
    ("x+exp(-x^2)", Monotonicity.INCREASING),
    ("-x+cos(x)/2", Monotonicity.DECREASING),
    ("sqrt(x^2+1)", Monotonicity.NON_MONOTONE),
    ("x+sin(x)", Monotonicity.INCREASING),
    ("x+2*sin(x)", Monotonicity.NON_MONOTONE),
])
def test_monotonicity(text, want):
    assert monotonicity_classify(parse_symbol(text)) == want


def test_monotonicity_needs_enough_points():
    with pytest.raises(ValueError):
        monotonicity_classify(parse_symbol("x"), GridSpec(L=10, N=100))
