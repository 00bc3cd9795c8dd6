"""Reduction of the scaled Fokker-Planck equation to an ODE in ``y(z)`` and its solution."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .profiles import (
    NONNEGATIVE,
    NONPOSITIVE,
    DomainInterval,
    Profile,
    UnsupportedOperationError,
    _poly_profile,
    evaluate,
    poly_add,
    poly_deriv,
    poly_equal,
    poly_sub,
    shape_function,
)

QUAD_EPSREL = 1e-10
QUAD_EPSABS = 1e-12
QUAD_LIMIT = 50
DIFF_STEP = 1e-3
SLOPE_TOL = 1e-12


class InteriorDegeneracyError(ValueError):
    pass


@dataclass(frozen=True)
class ReducedOde:
    """Coefficients of ``p2 y'' + p1 y' + p0 y = 0``."""

    p2: Profile
    p1: Profile
    p0: Profile
    alpha: float
    rho1: Profile
    rho2: Profile

    def identity_holds(self, tol: float = 1e-12) -> bool:
        lhs = poly_deriv(self.p1.coefficients)
        rhs = poly_add(poly_deriv(poly_deriv(self.p2.coefficients)), self.p0.coefficients)
        return poly_equal(lhs, rhs, tol)


@dataclass(frozen=True)
class FirstIntegral:
    """``p2 y' + q y = constant``; the constant is fixed to zero by the boundary conditions."""

    p2: Profile
    q: Profile
    constant: float
    domain: DomainInterval


@dataclass(frozen=True)
class ShapeSolution:
    f: Profile
    antiderivative: Callable = field(compare=False)
    domain: DomainInterval
    form: str
    params: dict = field(default_factory=dict, compare=False)

    def y(self, z):
        """Unnormalized profile ``exp(antiderivative(z))``."""
        return np.exp(self.antiderivative(z))


def _require_polynomial(*profiles: Profile) -> None:
    for p in profiles:
        if p.kind != "polynomial":
            raise UnsupportedOperationError("reduction needs polynomial profiles")


def reduce(rho1: Profile, rho2: Profile, alpha: float) -> ReducedOde:
    _require_polynomial(rho1, rho2)
    if not math.isfinite(alpha) or alpha == 0.0:
        raise ValueError("alpha must be finite and nonzero")
    r1, r2 = rho1.coefficients, rho2.coefficients
    dr2 = poly_deriv(r2)
    p1 = poly_add(poly_sub(poly_add(dr2, dr2), r1), (0.0, alpha))
    p0 = poly_add(poly_sub(poly_deriv(dr2), poly_deriv(r1)), (alpha,))
    ode = ReducedOde(_poly_profile(r2), _poly_profile(p1), _poly_profile(p0), alpha, rho1, rho2)
    if not ode.identity_holds():
        raise ArithmeticError("reducibility identity p1' = p2'' + p0 failed")
    return ode


def first_integral(ode: ReducedOde, domain: DomainInterval) -> FirstIntegral:
    # zero current and vanishing z*y at the boundary leave no room for a nonzero constant
    r1, r2 = ode.rho1.coefficients, ode.rho2.coefficients
    q = poly_add(poly_sub(poly_deriv(r2), r1), (0.0, ode.alpha))
    return FirstIntegral(p2=ode.p2, q=_poly_profile(q), constant=0.0, domain=domain)


def _interior_roots(coeffs: Sequence[float], domain: DomainInterval) -> list[float]:
    if len(coeffs) == 1:
        return []
    roots = np.roots(list(reversed(coeffs)))
    real = [r.real for r in roots if abs(r.imag) <= 1e-12 * max(1.0, abs(r))]
    return [r for r in real if domain.lower < r < domain.upper]


def quadrature_antiderivative(f: Callable, anchor: float) -> Callable:
    def F(z):
        def one(zz):
            val, _ = integrate.quad(f, anchor, zz, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
            return val

        if np.ndim(z) == 0:
            return one(float(z))
        return np.array([one(float(v)) for v in np.ravel(z)]).reshape(np.shape(z))

    return F


def solve_shape(
    fi: FirstIntegral,
    rho1: Profile,
    rho2: Profile,
    alpha: float,
    domain: DomainInterval,
    force_quadrature: bool = False,
) -> ShapeSolution:
    """Closed-form (or quadrature) antiderivative of the shape function on ``domain``.

    Recognizes constant diffusion with linear drift (quadratic exponent, or a pure
    exponential when the drift slope equals ``alpha``) and linear diffusion
    ``mu3*z`` with linear drift (power times exponential).  Anything else is
    integrated numerically from ``z0 = 0`` on the full line or ``z0 = +-1`` on
    a half line.
    """
    if fi.constant != 0.0:
        raise ValueError("only the zero-current first integral is solvable here")
    f = shape_function(rho1, rho2, alpha)

    if rho2.kind == "polynomial":
        r2 = rho2.coefficients
        gamma_like = len(r2) == 2 and r2[0] == 0.0 and domain.is_half_line
        roots = _interior_roots(r2, domain)
        if roots:
            raise InteriorDegeneracyError(f"rho2 vanishes inside the domain at z={roots[0]:g}")

        linear_drift = rho1.kind == "polynomial" and rho1.degree <= 1
        if linear_drift and not force_quadrature:
            mu2 = rho1.coefficients[0]
            mu1 = rho1.coefficients[1] if rho1.degree == 1 else 0.0
            if len(r2) == 1:
                mu4 = r2[0]
                if abs(mu1 - alpha) <= SLOPE_TOL * max(1.0, abs(alpha)):
                    return ShapeSolution(
                        f, lambda z: (mu2 / mu4) * z, domain, "pure-exponential", {"mu2": mu2, "mu4": mu4}
                    )
                return ShapeSolution(
                    f,
                    lambda z: ((mu1 - alpha) * z * z / 2.0 + mu2 * z) / mu4,
                    domain,
                    "gaussian-quadratic-exponent",
                    {"mu1": mu1, "mu2": mu2, "mu4": mu4},
                )
            if gamma_like:
                mu3 = r2[1]
                power = mu2 / mu3 - 1.0
                rate = (alpha - mu1) / mu3

                def F(z, power=power, rate=rate):
                    z = np.asarray(z, dtype=float)
                    with np.errstate(divide="ignore", invalid="ignore"):
                        logz = np.where(power == 0.0, 0.0, power * np.log(np.abs(z)))
                    out = logz - rate * z
                    return out.item() if out.ndim == 0 else out

                return ShapeSolution(
                    f, F, domain, "power-times-exponential", {"mu1": mu1, "mu2": mu2, "mu3": mu3}
                )

    if domain == NONNEGATIVE:
        anchor = 1.0
    elif domain == NONPOSITIVE:
        anchor = -1.0
    else:
        anchor = 0.0
    return ShapeSolution(f, quadrature_antiderivative(lambda z: evaluate(f, z), anchor), domain, "generic-quadrature")


def _step(p2: Profile, z: float) -> float:
    # where p2(0) = 0 the origin is a singular point; keep the stencil on one side of it
    if evaluate(p2, 0.0) == 0.0 and z != 0.0:
        return DIFF_STEP * abs(z)
    return DIFF_STEP * (abs(z) + 1.0)


def _derivatives(y: Callable, z: float, h: float) -> tuple[float, float, float]:
    # five-point stencils: O(h**4) truncation, round-off ~ eps/h**2 stays near 1e-10
    ym2, ym1, y0, yp1, yp2 = (y(z + k * h) for k in (-2, -1, 0, 1, 2))
    d1 = (ym2 - 8 * ym1 + 8 * yp1 - yp2) / (12 * h)
    d2 = (-ym2 + 16 * ym1 - 30 * y0 + 16 * yp1 - yp2) / (12 * h * h)
    return y0, d1, d2


def ode_residual(ode: ReducedOde, y: Callable, z_samples: Sequence[float]) -> float:
    """Max over samples of ``|p2 y'' + p1 y' + p0 y| / (1 + |y|)`` with central differences."""
    worst = 0.0
    for z in z_samples:
        z = float(z)
        y0, d1, d2 = _derivatives(y, z, _step(ode.p2, z))
        r = evaluate(ode.p2, z) * d2 + evaluate(ode.p1, z) * d1 + evaluate(ode.p0, z) * y0
        worst = max(worst, abs(r) / (1.0 + abs(y0)))
    return worst


def first_integral_residual(fi: FirstIntegral, y: Callable, z_samples: Sequence[float]) -> float:
    """Max over samples of ``|p2 y' + q y - constant| / (1 + |y|)``."""
    worst = 0.0
    for z in z_samples:
        z = float(z)
        y0, d1, _ = _derivatives(y, z, _step(fi.p2, z))
        r = evaluate(fi.p2, z) * d1 + evaluate(fi.q, z) * y0 - fi.constant
        worst = max(worst, abs(r) / (1.0 + abs(y0)))
    return worst
