import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from compop.errors import DomainError
from compop.jets import Jet, LogJet, bell_table, eval_jet, eval_logjet, iterate_eval
from compop.symbols import parse_symbol
from oracles import fd_jet, mp_eval, mp_iterate, sympy_jet


def test_examples():
    assert eval_jet(parse_symbol("x^2"), 3.0, 2).tolist() == [9.0, 6.0, 2.0]
    assert np.allclose(eval_jet(parse_symbol("sqrt(x^2+1)"), 0.0, 2).tolist(), [1, 0, 1])
    assert np.allclose(eval_jet(parse_symbol("exp(-x^2)"), 0.0, 2).tolist(), [1, 0, -2])


def test_jet_has_k_plus_one_entries():
    for k in range(6):
        assert len(eval_jet(parse_symbol("sin(x)*x"), 0.3, k).tolist()) == k + 1


def test_domain_errors():
    with pytest.raises(DomainError):
        eval_jet(parse_symbol("sqrt(x)"), -1.0, 1)
    with pytest.raises(DomainError):
        eval_jet(parse_symbol("sqrt(x)"), 0.0, 1)
    with pytest.raises(DomainError):
        eval_jet(parse_symbol("1/(x-1)"), 1.0, 0)


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


@given(st.lists(st.floats(-3, 3), min_size=6, max_size=6))
def test_bell_table_matches_set_partition_sum(g):
    g = [np.float64(0.0)] + [np.float64(v) for v in g[1:]]
    B = bell_table(g)
    for n in range(1, 6):
        brute = [0.0] * (n + 1)
        for part in _set_partitions(list(range(n))):
            brute[len(part)] += math.prod(g[len(b)] for b in part)
        for m in range(1, n + 1):
            assert B[n][m] == pytest.approx(brute[m], rel=1e-12, abs=1e-12)


# random smooth expressions, differentiated symbolically by sympy
_atoms = st.sampled_from(["x", "2", "0.5", "x^2", "x^3"])


def _grow(children):
    return st.one_of(
        st.tuples(children, st.sampled_from(["+", "-", "*"]), children).map(lambda t: f"({t[0]}){t[1]}({t[2]})"),
        st.tuples(st.sampled_from(["exp", "sin", "cos"]), children).map(lambda t: f"{t[0]}(({t[1]})/4)"),
        children.map(lambda c: f"sqrt(1+({c})^2)"),
        children.map(lambda c: f"1/(2+({c})^2)"),
    )


smooth = st.recursive(_atoms, _grow, max_leaves=5)


@given(smooth, st.sampled_from([-1.5, -0.25, 0.0, 0.4, 1.3]))
def test_jets_match_symbolic_derivatives(text, x):
    e = parse_symbol(text)
    got = eval_jet(e, x, 4).tolist()
    ref = sympy_jet(text, x, 4)
    for a, b in zip(got, ref):
        assert a == pytest.approx(b, rel=1e-9, abs=1e-9 * (1 + max(map(abs, ref))))


@given(smooth, st.sampled_from([-1.5, 0.0, 1.3]))
def test_log_jets_agree_with_plain_jets(text, x):
    e = parse_symbol(text)
    a = eval_jet(e, x, 3).tolist()
    b = eval_logjet(e, x, 3).derivs.tolist()
    for u, v in zip(a, b):
        assert v == pytest.approx(u, rel=1e-9, abs=1e-12 * (1 + max(map(abs, a))))


@pytest.mark.parametrize("text", ["x+1", "sqrt(x^2+1)", "x^3", "x+exp(-x^2)", "-x+cos(x)/2"])
def test_iterate_jets_against_finite_differences(text):
    phi = parse_symbol(text)
    rng = np.random.default_rng(7)
    for n in (1, 2, 3):
        for x in rng.uniform(-1.1, 1.1, 5):
            got = iterate_eval(phi, n, x, 4).tolist()
            ref = fd_jet(mp_iterate(phi, n), x, 4)
            for a, b in zip(got, ref):
                assert abs(a - b) <= 1e-6 * (1 + abs(b))


def test_iterate_examples():
    assert iterate_eval(parse_symbol("sqrt(x^2+1)"), 5, 2.0, 0).value == pytest.approx(3.0, rel=1e-15)
    assert iterate_eval(parse_symbol("x+1"), 7, 0.0, 1).tolist() == [7.0, 1.0]
    assert iterate_eval(parse_symbol("x^3"), 2, 0.5, 0).value == 0.001953125
    assert iterate_eval(parse_symbol("x^3"), 0, 0.5, 2).tolist() == [0.5, 1.0, 0.0]


@given(st.floats(-10, 10), st.integers(0, 40), st.integers(0, 40))
def test_semigroup_law(x, m, n):
    phi = parse_symbol("sqrt(x^2+1)")
    whole = iterate_eval(phi, m + n, x, 0).value
    split = iterate_eval(phi, m, iterate_eval(phi, n, x, 0).value, 0).value
    assert split == pytest.approx(whole, rel=1e-10)


@given(st.floats(-1.2, 1.2), st.integers(0, 4), st.integers(0, 4))
def test_semigroup_law_cubic(x, m, n):
    phi = parse_symbol("x^3-x/2")
    whole = iterate_eval(phi, m + n, x, 0).value
    split = iterate_eval(phi, m, iterate_eval(phi, n, x, 0).value, 0).value
    assert split == pytest.approx(whole, rel=1e-10, abs=1e-300)


def test_closed_form_sqrt_iterates():
    phi = parse_symbol("sqrt(x^2+1)")
    xs = np.linspace(-10, 10, 41)
    J = Jet.variable(xs, 0)
    from compop.jets import step
    for n in range(1, 1001):
        J = step(phi, J)
        exact = np.sqrt(xs**2 + n)
        assert np.all(np.abs(J.value - exact) <= 1e-12 * (1 + exact))


def test_overflow_switches_to_log_mode():
    phi = parse_symbol("exp(x^2+1)")
    assert not iterate_eval(phi, 2, 0.5, 2).is_log
    J = iterate_eval(phi, 3, 0.5, 2)
    assert J.is_log
    # log phi_3(x) = phi_2(x)^2 + 1
    inner = math.exp(math.exp(1.25) ** 2 + 1)
    assert J.log_value == pytest.approx(inner**2 + 1, rel=1e-12)
    assert np.all(J.sign == 1)


def test_log_jet_exact_zero_and_sign():
    lj = LogJet.variable(np.array([-2.0, 0.0]), 1)
    assert lj.sign[0].tolist() == [-1.0, 0.0]
    e = parse_symbol("x*exp(-x^2)")
    lj = eval_logjet(e, np.array([40.0, -40.0]), 1)
    # both values underflow as floats; the log form keeps them
    assert lj.sign[0].tolist() == [1.0, -1.0]
    assert lj.log[0][0] == pytest.approx(math.log(40.0) - 1600.0, rel=1e-14)


def test_mp_oracle_consistency():
    # the oracle itself: d/dx exp(x) at 0 is 1
    import mpmath as mp
    assert float(mp_eval(parse_symbol("exp(x)").root, mp.mpf(0))) == 1.0
