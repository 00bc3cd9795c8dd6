"""Scaling exponents and the drift/diffusion coefficients they admit."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .profiles import Profile, evaluate, poly_eval

EXPONENT_TOL = 1e-12
INVARIANCE_RTOL = 1e-10


class InconsistentScalingError(ValueError):
    pass


class DegenerateTimeScalingError(ValueError):
    pass


class InvalidTimeError(ValueError):
    pass


@dataclass(frozen=True)
class ScalingExponents:
    """Exponents of ``x -> eps**a x``, ``t -> eps**b t`` and of ``W``, ``D1``, ``D2``."""

    a: float
    b: float
    c: float
    d: float
    e: float
    alpha: float

    def check(self) -> None:
        if abs(self.b - (self.a - self.d)) > EXPONENT_TOL or abs(self.b - (2 * self.a - self.e)) > EXPONENT_TOL:
            raise InconsistentScalingError(f"b={self.b} violates b = a - d = 2a - e")
        if self.c != -self.a:
            raise InconsistentScalingError("normalization requires c = -a")
        if self.a == 0.0 or self.b == 0.0:
            raise DegenerateTimeScalingError("a and b must be nonzero")


def solve_exponents(a: float, d: float, e: float) -> ScalingExponents:
    if a == 0.0:
        raise DegenerateTimeScalingError("a must be nonzero")
    b = a - d
    if abs(b - (2 * a - e)) > EXPONENT_TOL:
        raise InconsistentScalingError(f"a - d = {b} but 2a - e = {2 * a - e}")
    if b == 0.0:
        raise DegenerateTimeScalingError("b = a - d vanishes; time does not scale")
    exps = ScalingExponents(a=a, b=b, c=-a, d=d, e=e, alpha=a / b)
    exps.check()
    return exps


def exponents_for_alpha(alpha: float) -> ScalingExponents:
    """Representative exponents with ``b = 1`` for a given ``alpha``."""
    return solve_exponents(alpha, alpha - 1.0, 2 * alpha - 1.0)


def similarity_variable(x, t, alpha: float):
    if np.any(np.asarray(t) <= 0):
        raise InvalidTimeError(f"t must be positive, got {t!r}")
    return x * np.power(np.asarray(t, dtype=float), -float(alpha))


@dataclass(frozen=True)
class CoefficientPair:
    """Drift ``D1(x, t)`` and diffusion ``D2(x, t)`` together with their generating profiles."""

    drift: Callable = field(compare=False)
    diffusion: Callable = field(compare=False)
    alpha: float
    rho1: Profile
    rho2: Profile


def synthesize_coefficients(rho1: Profile, rho2: Profile, alpha: float) -> CoefficientPair:
    if not math.isfinite(alpha) or alpha == 0.0:
        raise ValueError("alpha must be finite and nonzero")

    def drift(x, t):
        return np.power(t, alpha - 1.0) * evaluate(rho1, similarity_variable(x, t, alpha))

    def diffusion(x, t):
        return np.power(t, 2 * alpha - 1.0) * evaluate(rho2, similarity_variable(x, t, alpha))

    return CoefficientPair(drift=drift, diffusion=diffusion, alpha=alpha, rho1=rho1, rho2=rho2)


def _magnitude(profile: Profile, z: float, value: float) -> float:
    # size of the terms that were summed, so cancellation to ~0 is not read as a mismatch
    if profile.kind == "polynomial":
        return float(poly_eval(tuple(abs(c) for c in profile.coefficients), abs(z)))
    return abs(value)


def verify_scale_invariance(
    pair: CoefficientPair,
    epsilon: float,
    samples: Iterable[tuple[float, float]],
    exponents: ScalingExponents | None = None,
    rtol: float = INVARIANCE_RTOL,
) -> bool:
    """Check ``D(eps**a x, eps**b t) == eps**k D(x, t)`` for both coefficients at every sample.

    ``exponents`` defaults to the ``b = 1`` representative of ``pair.alpha``.
    """
    if not epsilon > 0 or epsilon == 1.0:
        raise ValueError("epsilon must be positive and different from 1")
    ex = exponents or exponents_for_alpha(pair.alpha)
    alpha = pair.alpha
    for x, t in samples:
        t_bar = epsilon**ex.b * t
        if t <= 0 or t_bar <= 0:
            raise InvalidTimeError("samples need t > 0")
        x_bar = epsilon**ex.a * x
        z = x * t ** (-alpha)
        for fn, k, rho, tpow in (
            (pair.drift, ex.d, pair.rho1, alpha - 1.0),
            (pair.diffusion, ex.e, pair.rho2, 2 * alpha - 1.0),
        ):
            lhs = float(fn(x_bar, t_bar))
            base = float(fn(x, t))
            rhs = epsilon**k * base
            scale = epsilon**k * t**tpow * _magnitude(rho, z, base * t ** (-tpow))
            if not abs(lhs - rhs) <= rtol * max(abs(lhs), abs(rhs), scale):
                return False
    return True
