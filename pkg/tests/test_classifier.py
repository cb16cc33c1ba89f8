from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from compop.classifier import (CITATIONS, ClassifierConfig, check_symbol_conditions, classify,
                               non_me_witness, uniform_pb_probe, validate_witness)
from compop.cli import load_symbol
from compop.errors import PreconditionError
from compop.poly import Poly
from compop.symbols import parse_symbol

from corpus import CORPUS, GOLDEN
from oracles import sign_scan_roots

_REPORTS = {}


def report(text):
    if text not in _REPORTS:
        _REPORTS[text] = classify(load_symbol(text))
    return _REPORTS[text]


@pytest.mark.parametrize("text", sorted(GOLDEN))
def test_golden_table(text):
    pb, me, rules = GOLDEN[text]
    r = report(text)
    assert (r.power_bounded, r.mean_ergodic) == (pb, me)
    assert rules <= set(r.rule_ids)
    assert all(rule["citation"] == CITATIONS[rule["id"]] for rule in r.rules_fired)


@pytest.mark.parametrize("text", CORPUS)
def test_report_invariants(text):
    r = report(text)
    assert r.violations() == []
    if r.power_bounded == "yes":
        assert "FM" in r.rule_ids
    for w in r.witnesses:
        assert validate_witness(load_symbol(text), w)


def test_open_case_never_guessed():
    r = report("x+exp(-x^2)")
    assert r.mean_ergodic == "unknown" and r.rule_ids == ["R3.open_case"]


@pytest.mark.parametrize("text,direction", [("-x-sin(x)/2", "Decreasing"), ("x+sin(x)/2", "Increasing")])
def test_monotone_shapes(text, direction):
    r = report(text)
    assert r.shape == {"kind": "monotone", "direction": direction}
    assert r.power_bounded == r.mean_ergodic == "no"


def test_decreasing_failure_carries_point():
    r = report("-x+3+cos(x)/4")
    (w,) = r.witnesses
    assert w.kind == "involution_failure"
    phi = parse_symbol("-x+3+cos(x)/4")
    x = w.data["x"]
    assert abs(phi(phi(x)) - x) > 1e-9 * (1 + abs(x))


def test_polynomial_shape_details():
    r = report("x^3+2")
    assert r.shape["kind"] == "polynomial" and r.shape["degree"] == 3
    assert r.shape["fixed_point_count"] == 1


def test_deterministic():
    cfg = ClassifierConfig()
    for text in ["x+2+sin(x)", "2*x", "sqrt(x^2+1)"]:
        a = classify(parse_symbol(text), cfg).to_dict()
        b = classify(parse_symbol(text), cfg).to_dict()
        assert a == b


def test_non_symbol_rejected():
    with pytest.raises(PreconditionError):
        classify(parse_symbol("exp(-x^2)"))
    with pytest.raises(PreconditionError):
        classify(parse_symbol("x+sqrt(x^2+1)"))


# symbol conditions

@pytest.mark.parametrize("text,i,ii", [
    ("sqrt(x^2+1)", "heuristic_pass", "heuristic_pass"),
    ("x^2+1", "pass", "pass"),
    ("x^3", "pass", "pass"),
    ("exp(x^2+1)", "heuristic_pass", "heuristic_pass"),
])
def test_symbol_conditions_pass(text, i, ii):
    c = check_symbol_conditions(parse_symbol(text))
    assert (c.condition_i, c.condition_ii) == (i, ii)
    assert c.counterexample is None and not c.failed


def test_bounded_function_fails_properness():
    c = check_symbol_conditions(parse_symbol("exp(-x^2)"))
    assert c.condition_ii == "fail"
    x, k = c.counterexample["x"], c.counterexample["k"]
    assert abs(x) >= k and np.exp(-x * x) < abs(x) ** (1 / k)


def test_symbol_check_requires_positive_order():
    with pytest.raises((ValueError, PreconditionError)):
        check_symbol_conditions(parse_symbol("x"), jmax=0)


# witnesses

def test_translation_witness():
    w = non_me_witness(parse_symbol("x+1"), k=1)
    assert w.kind == "bounded_image_sequence"
    for n, x, v in w.data["triples"][:20]:
        assert x == -n and v == 0


def test_doubling_witness():
    w = non_me_witness(parse_symbol("2*x"), k=2)
    assert w.kind == "bounded_orbit_plus_divergence"
    assert w.data["periodic_point"]["point"] == 0


def test_sqrt_has_no_witness():
    assert non_me_witness(parse_symbol("sqrt(x^2+1)")) is None


def test_tampered_witness_rejected():
    phi = parse_symbol("x+1")
    w = non_me_witness(phi, k=1)
    w.data["triples"][3][1] += 0.5
    assert not validate_witness(phi, w)


def test_horizon_cap():
    with pytest.raises(ValueError):
        non_me_witness(parse_symbol("x+1"), horizon=10_001)


# uniform probe

def test_probe_sqrt_consistent():
    r = uniform_pb_probe(parse_symbol("sqrt(x^2+1)"), N=100)
    assert r.consistent and all(p == 1 for p in r.p.values())


def test_probe_translation_violated():
    r = uniform_pb_probe(parse_symbol("x+1"), N=100)
    assert r.status == "violated"
    # the breaking point sits near -n, where the orbit passes through 0
    assert abs(r.x + r.n) <= 2


def test_probe_fast_growth_uses_log_mode():
    r = uniform_pb_probe(parse_symbol("exp(x^2+1)"), N=3)
    assert r.consistent and r.log_mode


# R2 versus an independent sign scan

coef = st.fractions(min_value=-4, max_value=4, max_denominator=6)


@settings(max_examples=30)
@given(st.lists(coef, min_size=3, max_size=7))
def test_polynomial_rule_matches_sign_scan(cs):
    if cs[-1] == 0:
        cs[-1] = Fraction(1)
    p = Poly(cs)
    text = " + ".join(f"({c})*x^{i}" for i, c in enumerate(cs))
    r = classify(parse_symbol(text), ClassifierConfig(run_probe=False))
    if r.symbol_check.failed or p.degree < 2:
        return
    q = [float(c) for c in (p - Poly.x()).coeffs]
    bound = 1 + max(abs(c / q[-1]) for c in q[:-1])
    roots = sign_scan_roots(q, -bound - 1, bound + 1, 400_001)
    expected = "yes" if (p.degree % 2 == 0 and roots == 0) else "no"
    # tangential fixed points can slip past a sign scan; only separated roots are compared
    if expected == "yes" and r.power_bounded == "no":
        assert r.shape["fixed_point_count"] >= 1
        return
    assert r.power_bounded == expected
