import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from compop.dynamics import (
    cesaro_mean, growth_flag, orbit_seminorm_profile, orbit_values, phi_star, seminorm,
)
from compop.errors import PreconditionError
from compop.grid import GridSpec
from compop.involution import InvolutionSymbol
from compop.schwartz import bump, gaussian, make_builtin, odd_gaussian
from compop.symbols import parse_symbol

SMALL = GridSpec(L=30, N=2048)
BUILTINS = ["gaussian", "odd_gaussian", "hermite:2", "bump:-1/2:1/2", "plateau:1:2"]


def _gauss_derivs(xs, n):
    out = []
    for j in range(n + 1):
        c = np.zeros(j + 1)
        c[j] = 1
        out.append((-math.sqrt(math.pi)) ** j * np.polynomial.hermite.hermval(math.sqrt(math.pi) * xs, c)
                   * np.exp(-math.pi * xs**2))
    return out


def test_seminorm_examples():
    assert seminorm(gaussian(), 0).value == pytest.approx(1.0, abs=1e-15)
    assert seminorm(bump(-0.5, 0.5), 0).value == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_seminorm_matches_dense_grid(n):
    xs = np.linspace(-30, 30, 1_000_001)
    oracle = max(float(np.max((1 + xs**2) ** n * np.abs(d))) for d in _gauss_derivs(xs, n))
    assert seminorm(gaussian(), n).value == pytest.approx(oracle, rel=1e-6)


@pytest.mark.parametrize("name", BUILTINS)
def test_seminorms_increase_with_index(name):
    f = make_builtin(name)
    vals = [seminorm(f, n, SMALL).value for n in range(9)]
    assert all(a <= b * (1 + 1e-12) for a, b in zip(vals, vals[1:]))


@given(st.sampled_from(["x+1", "sqrt(x^2+1)", "x^3", "-x+3", "2*x", "x^2-2"]),
       st.sampled_from(BUILTINS), st.integers(1, 30))
def test_orbit_range_invariant(sym, name, n):
    f = make_builtin(name)
    lo, hi = f.value_range()
    xs = np.linspace(-5, 5, 501)
    v = np.real(f(orbit_values(parse_symbol(sym), xs, n)[-1]))
    assert np.all(v >= lo - 1e-15) and np.all(v <= hi + 1e-15)


@given(st.sampled_from(["x+1", "sqrt(x^2+1)", "x^3", "-x+cos(x)/2"]), st.integers(2, 40))
def test_cesaro_telescoping(sym, N):
    phi, f = parse_symbol(sym), gaussian()
    xs = np.linspace(-4, 4, 161)
    a = cesaro_mean(phi, f, N, points=xs)
    b = cesaro_mean(phi, f, N - 1, points=xs)
    last = f(orbit_values(phi, xs, N)[-1])
    assert np.allclose(N * a.values - (N - 1) * b.values, last, atol=1e-12)


@pytest.mark.parametrize("phi", [parse_symbol("-x+3"), parse_symbol("-x"), InvolutionSymbol(parse_symbol("cos(x)/2"))])
@pytest.mark.parametrize("N", [1, 5, 40])
def test_involution_cesaro_limit(phi, N):
    f = gaussian()
    xs = np.linspace(-6, 6, 241)
    m = cesaro_mean(phi, f, 2 * N, points=xs)
    assert np.max(np.abs(m.values - (f(xs) + f(phi(xs))) / 2)) <= 1e-10


def test_reflection_kills_odd_functions():
    m = cesaro_mean(parse_symbol("-x"), odd_gaussian(), 100, SMALL)
    assert m.sup_norm <= 1e-12


@pytest.mark.parametrize("name", BUILTINS)
def test_translation_bound(name):
    f = make_builtin(name)
    phi = parse_symbol("x+1")
    for ell in (1, 2, 3):
        base = seminorm(f, ell, SMALL).value
        prof = orbit_seminorm_profile(phi, f, ell, 20, SMALL)
        for n, v in enumerate(prof.values, start=1):
            assert v <= (1 + 4 * n * n) ** ell * base * (1 + 1e-9)


def test_identity_profile_is_constant():
    prof = orbit_seminorm_profile(parse_symbol("x"), gaussian(), 2, 12, SMALL)
    assert np.ptp(prof.values) <= 1e-12 * prof.values[0]
    assert not prof.growth_flag


def test_growth_flag_rule():
    assert growth_flag([1, 1, 1, 1.1])
    assert not growth_flag([1, 1, 1, 1.09])
    assert not growth_flag([2, 1, 2, 1, 2, 1, 2, 1])


def test_phi_star_examples():
    assert phi_star(parse_symbol("x^3"), 0.5) == 0.0
    assert phi_star(parse_symbol("x^3"), 2.0) == math.inf
    assert phi_star(parse_symbol("x^3"), -2.0) == -math.inf
    assert phi_star(parse_symbol("x+1"), -40.0) == math.inf
    assert phi_star(parse_symbol("x/2+1"), 10.0) == pytest.approx(2.0)
    with pytest.raises(PreconditionError):
        phi_star(parse_symbol("-x"), 1.0)
