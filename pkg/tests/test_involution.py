import numpy as np
import pytest

from compop.errors import PreconditionError
from compop.involution import InvolutionSymbol, involution_from_even
from compop.symbols import parse_symbol

CASES = ["3", "cos(x)/2", "exp(-x^2)/2", "cos(x)^2/3"]
XS = np.linspace(-20, 20, 4001)


def test_constant_gives_reflection():
    assert np.allclose(involution_from_even(parse_symbol("3"), XS), 3 - XS, atol=1e-12)


@pytest.mark.parametrize("text", CASES)
def test_is_an_involution(text):
    phi = InvolutionSymbol(parse_symbol(text))
    assert np.all(np.abs(phi(phi(XS)) - XS) <= 1e-9 * (1 + np.abs(XS)))


@pytest.mark.parametrize("text", CASES)
def test_defining_relation(text):
    f = parse_symbol(text)
    y = involution_from_even(f, XS)
    assert np.allclose(XS + y, f(XS - y), atol=1e-12, rtol=0)


@pytest.mark.parametrize("text", CASES)
def test_slope_bounds(text):
    phi = InvolutionSymbol(parse_symbol(text))
    d = phi.jet(XS, 1).derivs[1]
    assert np.all(d < 0) and np.all(d > -2 / (1 - phi.a))
    # finite-difference check of the implicit derivative
    h = 1e-5
    fd = (phi(XS + h) - phi(XS - h)) / (2 * h)
    assert np.allclose(d, fd, rtol=1e-6, atol=1e-8)
    assert np.all(np.diff(phi(XS)) < 0)


def test_higher_jets_by_finite_differences():
    phi = InvolutionSymbol(parse_symbol("cos(x)/2"))
    x = np.array([0.3, -1.7, 4.2])
    d = phi.jet(x, 3).derivs
    h = 1e-3
    d2 = (phi(x + h) - 2 * phi(x) + phi(x - h)) / h**2
    d3 = (phi(x + 2 * h) - 2 * phi(x + h) + 2 * phi(x - h) - phi(x - 2 * h)) / (2 * h**3)
    assert np.allclose(d[2], d2, rtol=1e-4, atol=1e-6)
    assert np.allclose(d[3], d3, rtol=1e-3, atol=1e-4)


def test_cos_half_slope_range():
    phi = InvolutionSymbol(parse_symbol("cos(x)/2"))
    d = phi.jet(XS, 1).derivs[1]
    assert d.min() > -4 and d.max() < 0


@pytest.mark.parametrize("text", ["sin(x)/2", "x/2"])
def test_rejects_non_even(text):
    with pytest.raises(PreconditionError, match="even"):
        InvolutionSymbol(parse_symbol(text))


@pytest.mark.parametrize("text", ["x^2", "2*cos(x)"])
def test_rejects_non_contraction(text):
    with pytest.raises(PreconditionError, match="sup"):
        InvolutionSymbol(parse_symbol(text))
