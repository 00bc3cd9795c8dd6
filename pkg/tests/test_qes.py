import itertools

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from fpsim.profiles import UnsupportedOperationError, make_generic, make_polynomial
from fpsim.qes import QesClass1Params, QesOde, format_polynomial, fpe_reducible, qes_class1, reducibility_residual
from fpsim.reduction import reduce

z = sp.Symbol("z")
GRID = (-2, -1, 1, 2)


def symbolic_class1_residual(mu, a, b, c, N, E):
    mu, a, b, c, E = map(sp.Rational, (mu, a, b, c, E))
    P = mu * z**2
    Q = -(2 * a * z**2 - (2 * b + mu) * z - 2 * c)
    R = 2 * a * N * z + E / mu
    return sp.expand(sp.diff(Q, z) - sp.diff(P, z, 2) - R)


def parse_printed(text):
    return sp.expand(sp.sympify(text.replace("^", "**"), locals={"z": z}))


def test_class1_transcription():
    ode = qes_class1(QesClass1Params(1, 1, 1, 1, 1, 1))
    assert ode.P.coefficients == (0.0, 0.0, 1.0)
    assert ode.Q.coefficients == (2.0, 3.0, -2.0)
    assert ode.R.coefficients == (1.0, 2.0)


def test_class1_example_not_reducible():
    ode = qes_class1(QesClass1Params(1, 1, 1, 1, 1, 1))
    assert not fpe_reducible(ode)
    res = reducibility_residual(ode)
    assert res.coefficients == (0.0, -6.0)
    assert format_polynomial(res) == "-6*z"
    assert parse_printed(format_polynomial(res)) == symbolic_class1_residual(1, 1, 1, 1, 1, 1)


def test_class1_constant_r_when_linear_term_vanishes():
    ode = qes_class1(QesClass1Params(2.0, 0.0, 1.0, 1.0, 0, 3.0))
    assert ode.R.coefficients == (1.5,)


@pytest.mark.parametrize("bad", [dict(mu=0), dict(N=-1), dict(N=1.5)])
def test_class1_parameter_validation(bad):
    base = dict(mu=1, a_q=1, b_q=1, c_q=1, N=1, E=1)
    with pytest.raises(ValueError):
        QesClass1Params(**{**base, **bad})


def test_class1_grid_all_non_reducible():
    count = 0
    for mu, a, b, c, E in itertools.product(GRID, repeat=5):
        for N in range(4):
            ode = qes_class1(QesClass1Params(mu, a, b, c, N, E))
            assert not fpe_reducible(ode)
            printed = parse_printed(format_polynomial(reducibility_residual(ode)))
            assert sp.simplify(printed - symbolic_class1_residual(mu, a, b, c, N, E)) == 0
            count += 1
    assert count == 4**5 * 4


def test_gaussian_reduction_reducible():
    for alpha in (0.5, 1.0, 3.0):
        ode = QesOde.from_coefficients([1.0], [0.0, alpha - 1.0], [alpha - 1.0])
        assert fpe_reducible(ode)
        assert format_polynomial(reducibility_residual(ode)) == "0"


def test_non_polynomial_rejected():
    ode = QesOde(make_polynomial([1.0]), make_generic(np.sin), make_polynomial([0.0]))
    with pytest.raises(UnsupportedOperationError):
        fpe_reducible(ode)


def test_zero_p_rejected():
    with pytest.raises(ValueError):
        QesOde.from_coefficients([0.0], [1.0], [1.0])


def test_format_polynomial():
    assert format_polynomial(make_polynomial([2.0, -1.0, 0.5])) == "0.5*z^2 - z + 2"
    assert format_polynomial(make_polynomial([-1.0, 0.0, 3.0])) == "3*z^2 - 1"


coef = st.floats(-5, 5, allow_nan=False)
polys = st.lists(coef, min_size=1, max_size=5)
alphas = st.floats(-5, 5).filter(lambda a: abs(a) > 1e-3)


@given(polys, polys.filter(lambda c: any(c)), alphas)
def test_reduced_odes_are_reducible(r1, r2, alpha):
    assert fpe_reducible(QesOde.from_reduced(reduce(make_polynomial(r1), make_polynomial(r2), alpha)))


@given(
    st.lists(st.integers(-5, 5), min_size=1, max_size=4).filter(lambda p: any(p)),
    st.lists(st.integers(-5, 5), min_size=1, max_size=4),
    st.lists(st.integers(-5, 5), min_size=1, max_size=4),
    st.sampled_from([-3.0, -0.5, 0.25, 2.0, 7.0]),
)
def test_predicate_is_scale_covariant(p, q, r, k):
    base = QesOde.from_coefficients(p, q, r)
    scaled = QesOde.from_coefficients([k * v for v in p], [k * v for v in q], [k * v for v in r])
    assert fpe_reducible(base) == fpe_reducible(scaled)


@given(
    st.lists(st.integers(-5, 5), min_size=1, max_size=4).filter(lambda p: any(p)),
    st.lists(st.integers(-5, 5), min_size=1, max_size=4),
    st.lists(st.integers(-5, 5), min_size=1, max_size=4),
)
def test_residual_matches_symbolic(p, q, r):
    P, Q, R = (sum(c * z**i for i, c in enumerate(v)) for v in (p, q, r))
    expected = sp.expand(sp.diff(Q, z) - sp.diff(P, z, 2) - R)
    res = reducibility_residual(QesOde.from_coefficients(p, q, r))
    assert sp.expand(parse_printed(format_polynomial(res)) - expected) == 0
    assert fpe_reducible(QesOde.from_coefficients(p, q, r)) == (expected == 0)
