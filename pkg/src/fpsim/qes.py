"""Necessary condition for a linear second-order ODE to be a similarity-reduced FPE.

An ODE ``P y'' + Q y' + R y = 0`` can only come from the reduction when
``Q' = P'' + R``.  The Class I quasi-exactly-solvable model is provided as a
family that never meets the condition unless its quadratic coefficient vanishes.
"""
from __future__ import annotations

from dataclasses import dataclass

from .profiles import Profile, UnsupportedOperationError, _poly_profile, make_polynomial, poly_deriv, poly_sub
from .reduction import ReducedOde

COEFF_TOL = 1e-12


@dataclass(frozen=True)
class QesOde:
    P: Profile
    Q: Profile
    R: Profile

    def __post_init__(self):
        if self.P.kind == "polynomial" and self.P.is_zero():
            raise ValueError("P must not be identically zero")

    @classmethod
    def from_coefficients(cls, p, q, r) -> "QesOde":
        return cls(make_polynomial(p), make_polynomial(q), make_polynomial(r))

    @classmethod
    def from_reduced(cls, ode: ReducedOde) -> "QesOde":
        return cls(ode.p2, ode.p1, ode.p0)


@dataclass(frozen=True)
class QesClass1Params:
    mu: float
    a_q: float
    b_q: float
    c_q: float
    N: int
    E: float

    def __post_init__(self):
        if self.mu == 0:
            raise ValueError("mu must be nonzero")
        if int(self.N) != self.N or self.N < 0:
            raise ValueError("N must be a non-negative integer")


def reducibility_residual(ode: QesOde) -> Profile:
    """``Q' - P'' - R`` as a canonical polynomial."""
    for p in (ode.P, ode.Q, ode.R):
        if p.kind != "polynomial":
            raise UnsupportedOperationError("reducibility test needs polynomial P, Q, R")
    P, Q, R = ode.P.coefficients, ode.Q.coefficients, ode.R.coefficients
    return _poly_profile(poly_sub(poly_sub(poly_deriv(Q), poly_deriv(poly_deriv(P))), R))


def fpe_reducible(ode: QesOde, tol: float = COEFF_TOL) -> bool:
    return all(abs(c) <= tol for c in reducibility_residual(ode).coefficients)


def qes_class1(params: QesClass1Params) -> QesOde:
    """``mu z^2 y'' - [2a z^2 - (2b + mu) z - 2c] y' + [2aN z + E/mu] y = 0``."""
    mu, a, b, c = params.mu, params.a_q, params.b_q, params.c_q
    if mu == 0:
        raise ValueError("mu must be nonzero")
    return QesOde.from_coefficients(
        [0.0, 0.0, mu],
        [2 * c, 2 * b + mu, -2 * a],
        [params.E / mu, 2 * a * params.N],
    )


def format_polynomial(p: Profile, var: str = "z") -> str:
    terms = []
    for power, c in reversed(list(enumerate(p.coefficients))):
        if c == 0.0:
            continue
        mag = abs(c)
        coef = "" if (mag == 1.0 and power > 0) else f"{mag:g}"
        mono = "" if power == 0 else (var if power == 1 else f"{var}^{power}")
        body = coef + ("*" if coef and mono else "") + mono
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out

