import functools
import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from fpsim.profiles import FULL_LINE, NONNEGATIVE, NONPOSITIVE, UnsupportedOperationError, make_generic, make_polynomial
from fpsim.reduction import (
    InteriorDegeneracyError,
    first_integral,
    first_integral_residual,
    ode_residual,
    reduce,
    solve_shape,
)


@functools.lru_cache(maxsize=1)
def _symbolic_reduction():
    """Substitute W = t^-a y(x/t^a) into the PDE and read off the ODE coefficients in y."""
    x, t, z = sp.symbols("x t z", positive=True)
    a = sp.Symbol("a", nonzero=True)
    r = sp.symbols("r0:3")
    s = sp.symbols("s0:3")
    y = sp.Function("y")
    zz = x * t ** (-a)
    W = t ** (-a) * y(zz)
    d1 = t ** (a - 1) * sum(r[i] * zz**i for i in range(3))
    d2 = t ** (2 * a - 1) * sum(s[i] * zz**i for i in range(3))
    res = sp.diff(W, t) + sp.diff(d1 * W, x) - sp.diff(d2 * W, x, 2)
    res = sp.expand((res * t ** (a + 1)).subs(x, z * t**a).doit())
    Y, Y1, Y2 = sp.symbols("Y Y1 Y2")
    res = res.subs(sp.Derivative(y(z), (z, 2)), Y2).subs(sp.Derivative(y(z), z), Y1).subs(y(z), Y)
    # the PDE residual is minus the ODE left-hand side
    coeffs = [-sp.expand(res).coeff(v) for v in (Y2, Y1, Y)]
    return sp.lambdify((a, r, s, z), coeffs, "math")


def _poly_at(p, z):
    return sum(c * z**i for i, c in enumerate(p.coefficients))


def test_reduce_gaussian_family():
    mu1, mu2, mu4, alpha = 0.5, 1.0, 1.0, 1.0
    ode = reduce(make_polynomial([mu2, mu1]), make_polynomial([mu4]), alpha)
    assert ode.p2.coefficients == (mu4,)
    assert ode.p1.coefficients == (-mu2, alpha - mu1)
    assert ode.p0.coefficients == (alpha - mu1,)


def test_reduce_gamma_family():
    mu1, mu2, mu3, alpha = -3.0, 0.5, 0.5, -2.0
    ode = reduce(make_polynomial([mu2, mu1]), make_polynomial([0, mu3]), alpha)
    assert ode.p2.coefficients == (0.0, mu3)
    assert ode.p1.coefficients == (2 * mu3 - mu2, alpha - mu1)
    assert ode.p0.coefficients == (alpha - mu1,)


def test_reduce_exact_cancellation():
    alpha = 0.7
    ode = reduce(make_polynomial([0, alpha]), make_polynomial([1]), alpha)
    assert ode.p1.is_zero() and ode.p0.is_zero()


def test_reduce_rejects_generic():
    with pytest.raises(UnsupportedOperationError):
        reduce(make_generic(np.sin), make_polynomial([1]), 1.0)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.floats(-3, 3), min_size=3, max_size=3),
    st.lists(st.floats(-3, 3), min_size=3, max_size=3),
    st.floats(-3, 3).filter(lambda a: abs(a) > 0.05),
    st.floats(-4, 4),
)
def test_reduce_matches_symbolic_substitution(r, s, alpha, z):
    ode = reduce(make_polynomial(r), make_polynomial(s), alpha)
    expected = _symbolic_reduction()(alpha, r, s, z)
    got = [_poly_at(p, z) for p in (ode.p2, ode.p1, ode.p0)]
    for e, g in zip(expected, got):
        assert g == pytest.approx(e, rel=1e-10, abs=1e-10)


@given(
    st.lists(st.floats(-5, 5), min_size=1, max_size=6),
    st.lists(st.floats(-5, 5), min_size=1, max_size=6),
    st.floats(-5, 5).filter(lambda a: abs(a) > 1e-3),
)
def test_reducibility_identity(r, s, alpha):
    assert reduce(make_polynomial(r), make_polynomial(s), alpha).identity_holds()


def test_first_integral_examples():
    mu1, mu2, mu3, mu4, alpha = 0.25, 1.5, 0.5, 2.0, 1.0
    g = first_integral(reduce(make_polynomial([mu2, mu1]), make_polynomial([mu4]), alpha), FULL_LINE)
    assert g.q.coefficients == (-mu2, alpha - mu1) and g.constant == 0.0
    h = first_integral(reduce(make_polynomial([mu2, mu1]), make_polynomial([0, mu3]), alpha), NONNEGATIVE)
    assert h.q.coefficients == (mu3 - mu2, alpha - mu1) and h.constant == 0.0


def _shape(r, s, alpha, domain=FULL_LINE, **kw):
    rho1, rho2 = make_polynomial(r), make_polynomial(s)
    ode = reduce(rho1, rho2, alpha)
    fi = first_integral(ode, domain)
    return ode, fi, solve_shape(fi, rho1, rho2, alpha, domain, **kw)


def test_gaussian_form_exponent():
    mu1, mu2, mu4, alpha = 0.5, 1.0, 2.0, 1.0
    _, _, sh = _shape([mu2, mu1], [mu4], alpha)
    assert sh.form == "gaussian-quadratic-exponent"
    for z in (-3.0, 0.4, 2.5):
        assert sh.antiderivative(z) == pytest.approx(((mu1 - alpha) * z * z / 2 + mu2 * z) / mu4, rel=1e-14)


def test_exponential_form_exponent():
    _, _, sh = _shape([-6, 3], [2], 3.0, NONNEGATIVE)
    assert sh.form == "pure-exponential"
    assert sh.antiderivative(1.5) == pytest.approx(-3 * 1.5)


def test_gamma_form_profile():
    mu1, mu2, mu3, alpha = -3.0, 1.5, 0.5, -2.0
    _, _, sh = _shape([mu2, mu1], [0, mu3], alpha, NONNEGATIVE)
    assert sh.form == "power-times-exponential"
    k, lam = mu2 / mu3, (alpha - mu1) / mu3
    zs = np.array([0.1, 1.0, 4.0])
    ratio = sh.y(zs) / (zs ** (k - 1) * np.exp(-lam * zs))
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-13)


def test_interior_degeneracy_rejected():
    with pytest.raises(InteriorDegeneracyError):
        _shape([0, 1], [-1, 0, 1], 1.0)
    with pytest.raises(InteriorDegeneracyError):
        _shape([1, 0.5], [0, 1], 1.0, FULL_LINE)
    _shape([1, 0.5], [0, 1], 1.0, NONNEGATIVE)


def test_ode_residual_gaussian_solution():
    mu1, mu2, mu4, alpha = 0.5, 1.0, 1.0, 1.0
    ode, _, sh = _shape([mu2, mu1], [mu4], alpha)
    assert ode_residual(ode, sh.y, np.linspace(-5, 5, 101)) < 1e-6


def test_ode_residual_constant_is_not_a_solution():
    mu1, alpha = 0.25, 1.0
    ode, _, _ = _shape([0.0, mu1], [1.0], alpha)
    r = ode_residual(ode, lambda z: 1.0, [0.0])
    # |p0 * 1| / (1 + |1|)
    assert r == pytest.approx(abs(alpha - mu1) / 2, rel=1e-9)
    assert r > 0


def test_ode_residual_exponential_solution():
    mu2, mu4, alpha = -6.0, 2.0, 3.0
    ode, _, _ = _shape([mu2, alpha], [mu4], alpha, NONNEGATIVE)
    assert ode_residual(ode, lambda z: math.exp(mu2 / mu4 * z), np.linspace(0, 5, 50)) < 1e-6


@settings(max_examples=30, deadline=None)
@given(
    st.floats(0.2, 2.0),
    st.floats(-2.0, 0.0),
    st.floats(-1.5, 1.5),
    st.floats(0.25, 2.0),
)
def test_recognized_gaussian_shape_solves_ode(alpha, mu1, mu2, mu4):
    ode, fi, sh = _shape([mu2, mu1], [mu4], alpha)
    lam = alpha - mu1
    m, s = mu2 / lam, math.sqrt(mu4 / lam)
    zs = np.linspace(m - 4 * s, m + 4 * s, 100)
    assert ode_residual(ode, sh.y, zs) < 1e-6
    assert first_integral_residual(fi, sh.y, zs) < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.floats(-2.0, 2.0).filter(lambda a: abs(a) > 0.2), st.floats(0.2, 2.0), st.floats(1.0, 4.0), st.floats(0.25, 2.0))
def test_recognized_gamma_shape_solves_ode(alpha, lam, k, mu3):
    mu1 = alpha - lam * mu3
    ode, fi, sh = _shape([k * mu3, mu1], [0, mu3], alpha, NONNEGATIVE)
    zs = np.linspace(0.01 * k / lam, (k + 6 * math.sqrt(k)) / lam, 100)
    assert ode_residual(ode, sh.y, zs) < 1e-6
    assert first_integral_residual(fi, sh.y, zs) < 1e-9


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 2.0), st.floats(-1.0, 1.0).filter(lambda v: abs(v) > 0.1), st.floats(0.25, 2.0), st.booleans())
def test_recognized_exponential_shape_solves_ode(alpha, mu2, mu4, flip):
    mu2 = abs(mu2) * (1 if flip else -1)
    domain = NONNEGATIVE if mu2 / mu4 < 0 else NONPOSITIVE
    ode, fi, sh = _shape([mu2, alpha], [mu4], alpha, domain)
    scale = abs(mu4 / mu2)
    zs = np.linspace(0.01, 8.0, 100) * scale * (1 if domain is NONNEGATIVE else -1)
    assert ode_residual(ode, sh.y, zs) < 1e-6
    assert first_integral_residual(fi, sh.y, zs) < 1e-9


def test_generic_branch_agrees_with_closed_form():
    mu1, mu2, mu4, alpha = 0.5, 1.0, 1.0, 1.0
    _, _, closed = _shape([mu2, mu1], [mu4], alpha)
    _, _, quad = _shape([mu2, mu1], [mu4], alpha, force_quadrature=True)
    assert quad.form == "generic-quadrature"
    zs = np.linspace(-3, 5, 41)
    ratio = quad.y(zs) / closed.y(zs)
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-8)


def test_generic_branch_half_line_anchor():
    mu1, mu2, mu3, alpha = -3.0, 1.5, 0.5, -2.0
    _, _, closed = _shape([mu2, mu1], [0, mu3], alpha, NONNEGATIVE)
    _, _, quad = _shape([mu2, mu1], [0, mu3], alpha, NONNEGATIVE, force_quadrature=True)
    assert quad.antiderivative(1.0) == 0.0
    zs = np.linspace(0.05, 6, 30)
    ratio = quad.y(zs) / closed.y(zs)
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-8)


def test_nonlinear_drift_uses_quadrature():
    # rho1 = -z - z^3, rho2 = 1, alpha = 1/2: exponent -(3/4) z^2 - z^4/4
    ode, fi, sh = _shape([0, -1, 0, -1], [1], 0.5)
    assert sh.form == "generic-quadrature"
    for z in (-1.5, 0.3, 2.0):
        assert sh.antiderivative(z) == pytest.approx(-0.75 * z * z - z**4 / 4, rel=1e-9)
    assert ode_residual(ode, sh.y, np.linspace(-2, 2, 21)) < 1e-6
