from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from compop.poly import (
    Poly, cauchy_bound, fixed_points, gcd, isolate_real_roots, poly_from_expr, square_free_part,
    sturm_root_count, yun_decomposition,
)
from compop.symbols import parse_symbol
from oracles import sign_scan_roots

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=8)


def from_roots(roots, lc=Fraction(1)):
    p = Poly([lc])
    for r in roots:
        p = p * Poly([-r, 1])
    return p


def test_canonical_form():
    assert Poly([1, 2, 0, 0]).coeffs == (1, 2)
    assert Poly([0, 0]).degree == -1 and Poly().is_zero()


def test_poly_from_expr_examples():
    assert poly_from_expr(parse_symbol("x^2+1")).coeffs == (1, 0, 1)
    assert poly_from_expr(parse_symbol("(x+1)*(x-1)")).coeffs == (-1, 0, 1)
    assert poly_from_expr(parse_symbol("sqrt(x^2+1)")) is None
    assert poly_from_expr(parse_symbol("x/x")) is None
    assert poly_from_expr(parse_symbol("(x^2)/4")).coeffs == (0, 0, Fraction(1, 4))


def test_float_conversion_is_exact():
    p = poly_from_expr(parse_symbol("0.1*x"))
    assert p.coeffs[1] == Fraction(0.1) != Fraction(1, 10)


def test_sturm_examples():
    assert sturm_root_count(Poly([-2, 0, 1]), 0, 2) == 1
    assert sturm_root_count(Poly([0, -1, 0, 1]), -2, 2) == 3
    # half-open: root at hi counts, at lo does not
    assert sturm_root_count(Poly([0, -1, 0, 1]), -1, 1) == 2
    assert sturm_root_count(Poly([1, 0, 1]), float("-inf"), float("inf")) == 0
    with pytest.raises(ValueError):
        sturm_root_count(Poly([1, 1]), 1, 1)


def test_fixed_point_examples():
    assert fixed_points(poly_from_expr(parse_symbol("x^2+1"))) == []
    three = fixed_points(poly_from_expr(parse_symbol("x^3")))
    assert [r.contains(v) for r, v in zip(three, (-1, 0, 1))] == [True] * 3
    (double,) = fixed_points(poly_from_expr(parse_symbol("x^2+1/4")))
    assert double.contains(Fraction(1, 2)) and double.multiplicity_hint == 2
    assert double.hi - double.lo <= Fraction(1, 2**32)
    with pytest.raises(ValueError):
        fixed_points(Poly([0, 1]))


@given(st.lists(rationals, min_size=1, max_size=6), st.lists(st.integers(1, 3), min_size=6, max_size=6))
def test_yun_reconstructs(roots, mults):
    p = Poly([Fraction(3)])
    for r, m in zip(roots, mults):
        p = p * Poly([-r, 1]) ** m
    prod = Poly([p.lc])
    for m, f in yun_decomposition(p):
        assert f.lc == 1
        prod = prod * f**m
    assert prod == p


@given(st.lists(rationals, min_size=1, max_size=6, unique=True))
def test_isolation_separates_distinct_roots(roots):
    p = from_roots(roots + roots[:1])
    ivs = isolate_real_roots(p)
    assert len(ivs) == len(roots)
    for iv in ivs:
        assert iv.lo < iv.hi
        assert sum(iv.contains(r) for r in roots) == 1
    hit = next(iv for iv in ivs if iv.contains(roots[0]))
    assert hit.multiplicity_hint == 2


@given(st.lists(rationals, min_size=0, max_size=6), st.lists(rationals, min_size=0, max_size=3))
def test_total_count_below_cauchy_bound(roots, extra):
    # extra quadratic factors (x - c)^2 + 1 carry no real roots
    p = from_roots(roots)
    for c in extra:
        p = p * Poly([c * c + 1, -2 * c, 1])
    if p.degree <= 0:
        return
    B = cauchy_bound(p)
    assert sturm_root_count(p, -B, B) == len(set(roots))
    assert sturm_root_count(p, float("-inf"), float("inf")) == len(set(roots))


@given(st.lists(rationals, min_size=1, max_size=6, unique=True))
def test_sturm_matches_sign_scan(roots):
    # distinct rational roots at spacing >= 1/64, grid spacing 1e-5: sign changes are resolved
    roots = sorted(roots)
    if any(b - a < Fraction(1, 64) for a, b in zip(roots, roots[1:])):
        return
    p = from_roots(roots, Fraction(1, 3))
    count = sturm_root_count(p, Fraction(-6), Fraction(6))
    assert count == sign_scan_roots([float(c) for c in p.coeffs], -6.0, 6.0) == len(roots)


def test_square_free_and_gcd():
    p = from_roots([1, 1, 2, 3, 3, 3])
    assert square_free_part(p) == from_roots([1, 2, 3])
    assert gcd(p, p.derivative()) == from_roots([1, 3, 3])


def test_compose_and_eval_exact():
    p, q = Poly([1, 0, 1]), Poly([1, 1])
    assert p.compose(q) == Poly([2, 2, 1])
    assert p(Fraction(1, 3)) == Fraction(10, 9)
    assert p.sign_at(float("-inf")) == 1 and Poly([0, 0, 0, -1]).sign_at(float("-inf")) == 1
