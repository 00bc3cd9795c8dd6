"""Normalized similarity solutions: Gaussian, one-sided exponential and gamma families.

Each family is fixed by ``alpha`` and the coefficients of ``rho1 = mu1*z + mu2``
and ``rho2 = mu4`` (constant diffusion) or ``rho2 = mu3*z`` (linear diffusion).
Densities are evaluated from the closed forms; ``normalization`` is the
constant ``A`` in ``W = A t**-alpha exp(F(z))``, with ``F`` the antiderivative
produced by :func:`fpsim.reduction.solve_shape` for the same profiles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .profiles import FULL_LINE, NONNEGATIVE, NONPOSITIVE, DomainInterval, make_polynomial
from .scaling import CoefficientPair, InvalidTimeError, synthesize_coefficients

FWHM_FACTOR = 2.0 * math.sqrt(2.0 * math.log(2.0))

FAMILIES = ("gaussian", "exponential", "gamma")
TRANSFORMS = ("mirror-mu2", "conjugate-params", "ratio-rescale", "time-inversion")


class UnnormalizableError(ValueError):
    pass


class DegenerateFamilyError(ValueError):
    pass


class UnsupportedStatisticError(ValueError):
    pass


class UndefinedCrossingError(ValueError):
    pass


class UnsupportedTransformError(ValueError):
    pass


@dataclass(frozen=True)
class SimilaritySolution:
    family: str
    alpha: float
    mu1: float
    mu2: float
    mu3: float | None
    mu4: float | None
    domain: DomainInterval
    normalization: float

    # -- family-specific scale parameters -------------------------------
    @property
    def lam(self) -> float:
        """``alpha - mu1`` (Gaussian) or ``(alpha - mu1)/mu3`` (gamma)."""
        if self.family == "gamma":
            return (self.alpha - self.mu1) / self.mu3
        return self.alpha - self.mu1

    @property
    def shape(self) -> float:
        if self.family != "gamma":
            raise AttributeError("shape is defined for the gamma family only")
        return self.mu2 / self.mu3

    def rate(self, t):
        """Exponential rate in ``x`` at time ``t`` (exponential: signed ``mu2/(mu4 t**alpha)``)."""
        if self.family == "exponential":
            return self.mu2 / (self.mu4 * np.power(t, self.alpha))
        if self.family == "gamma":
            return self.lam * np.power(t, -self.alpha)
        raise AttributeError("rate is not defined for the Gaussian family")

    def mean(self, t):
        if self.family == "gaussian":
            return self.mu2 * np.power(t, self.alpha) / self.lam
        if self.family == "exponential":
            return -1.0 / self.rate(t)
        return self.shape / self.rate(t)

    def variance(self, t):
        if self.family == "gaussian":
            return self.mu4 * np.power(t, 2 * self.alpha) / self.lam
        if self.family == "exponential":
            return 1.0 / self.rate(t) ** 2
        return self.shape / self.rate(t) ** 2

    def profiles(self):
        rho1 = make_polynomial([self.mu2, self.mu1])
        rho2 = make_polynomial([self.mu4] if self.family != "gamma" else [0.0, self.mu3])
        return rho1, rho2

    def coefficients(self) -> CoefficientPair:
        return synthesize_coefficients(*self.profiles(), self.alpha)


def gaussian_solution(alpha: float, mu1: float, mu2: float, mu4: float) -> SimilaritySolution:
    alpha, mu1, mu2, mu4 = map(float, (alpha, mu1, mu2, mu4))
    if alpha == 0.0:
        raise ValueError("alpha must be nonzero")
    lam = alpha - mu1
    if not ((mu4 > 0 and lam > 0) or (mu4 < 0 and lam < 0)):
        raise UnnormalizableError(
            f"Gaussian family needs (mu4>0, mu1<alpha) or (mu4<0, mu1>alpha); got mu4={mu4}, mu1={mu1}, alpha={alpha}"
        )
    # A * exp(((mu1-alpha) z^2/2 + mu2 z)/mu4) integrates to one over z
    norm = math.sqrt(lam / (2 * math.pi * mu4)) * math.exp(-(mu2**2) / (2 * mu4 * lam))
    return SimilaritySolution("gaussian", alpha, mu1, mu2, None, mu4, FULL_LINE, norm)


def exponential_solution(alpha: float, mu2: float, mu4: float) -> SimilaritySolution:
    alpha, mu2, mu4 = map(float, (alpha, mu2, mu4))
    if alpha == 0.0:
        raise ValueError("alpha must be nonzero")
    if mu2 == 0.0 or mu4 == 0.0:
        raise DegenerateFamilyError("exponential family needs mu2 != 0 and mu4 != 0")
    domain = NONNEGATIVE if mu2 / mu4 < 0 else NONPOSITIVE
    return SimilaritySolution("exponential", alpha, alpha, mu2, None, mu4, domain, abs(mu2 / mu4))


def gamma_solution(alpha: float, mu1: float, mu2: float, mu3: float) -> SimilaritySolution:
    alpha, mu1, mu2, mu3 = map(float, (alpha, mu1, mu2, mu3))
    if alpha == 0.0:
        raise ValueError("alpha must be nonzero")
    if mu3 == 0.0:
        raise UnnormalizableError("gamma family needs mu3 != 0")
    lam = (alpha - mu1) / mu3
    k = mu2 / mu3
    if not lam > 0:
        raise UnnormalizableError(f"gamma family needs (alpha-mu1)/mu3 > 0; got {lam}")
    if not k >= 1:
        raise UnnormalizableError(f"gamma family needs mu2/mu3 >= 1; got {k}")
    norm = math.exp(k * math.log(lam) - math.lgamma(k))
    return SimilaritySolution("gamma", alpha, mu1, mu2, mu3, None, NONNEGATIVE, norm)


def make_solution(family: str, params: dict) -> SimilaritySolution:
    """Build a family member from a parameter mapping (``alpha``, ``mu1`` ... ``mu4``)."""
    if family == "gaussian":
        return gaussian_solution(params["alpha"], params["mu1"], params["mu2"], params["mu4"])
    if family == "exponential":
        if "mu1" in params and params["mu1"] != params["alpha"]:
            raise DegenerateFamilyError("exponential family requires mu1 == alpha")
        return exponential_solution(params["alpha"], params["mu2"], params["mu4"])
    if family == "gamma":
        return gamma_solution(params["alpha"], params["mu1"], params["mu2"], params["mu3"])
    raise ValueError(f"unknown family {family!r}")


def _check_time(t) -> None:
    if np.any(np.asarray(t) <= 0):
        raise InvalidTimeError(f"t must be positive, got {t!r}")


def _finish(out):
    return out.item() if np.ndim(out) == 0 else out


def density(sol: SimilaritySolution, x, t):
    """``W(x, t)``; zero outside a half-line domain. Broadcasts over ``x`` and ``t``."""
    _check_time(t)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    if sol.family == "gaussian":
        var = sol.variance(t)
        out = np.exp(-((x - sol.mean(t)) ** 2) / (2 * var)) / np.sqrt(2 * math.pi * var)
    elif sol.family == "exponential":
        r = sol.rate(t)
        inside = sol.domain.contains(x)
        with np.errstate(over="ignore"):
            out = np.where(inside, np.abs(r) * np.exp(np.where(inside, r * x, 0.0)), 0.0)
    else:
        r = sol.rate(t)
        k = sol.shape
        xpos = np.where(x > 0, x, 1.0)
        body = np.exp(k * np.log(r) - math.lgamma(k) + (k - 1.0) * np.log(xpos) - r * xpos)
        at_zero = r if k == 1.0 else 0.0
        out = np.where(x > 0, body, np.where(x == 0, at_zero, 0.0))
    return _finish(out)


def cdf(sol: SimilaritySolution, x, t):
    _check_time(t)
    x = np.asarray(x, dtype=float)
    if sol.family == "gaussian":
        out = special.ndtr((x - sol.mean(t)) / np.sqrt(sol.variance(t)))
    elif sol.family == "exponential":
        r = sol.rate(t)
        if sol.domain == NONNEGATIVE:
            out = np.where(x >= 0, -np.expm1(np.minimum(r * x, 0.0)), 0.0)
        else:
            out = np.where(x <= 0, np.exp(np.minimum(r * x, 0.0)), 1.0)
    else:
        out = np.where(x > 0, special.gammainc(sol.shape, sol.rate(t) * np.maximum(x, 0.0)), 0.0)
    return _finish(out)


def quantile(sol: SimilaritySolution, u, t):
    """Inverse of :func:`cdf` in ``x`` for ``u`` in (0, 1)."""
    _check_time(t)
    u = np.asarray(u, dtype=float)
    if sol.family == "gaussian":
        out = sol.mean(t) + np.sqrt(sol.variance(t)) * special.ndtri(u)
    elif sol.family == "exponential":
        r = sol.rate(t)
        out = -np.log1p(-u) / abs(r) if sol.domain == NONNEGATIVE else np.log(u) / abs(r)
    else:
        out = special.gammaincinv(sol.shape, u) / sol.rate(t)
    return _finish(out)


def current(sol: SimilaritySolution, x, t):
    """Probability current ``J = alpha x W / t`` of a zero-boundary-flux similarity solution."""
    return _finish(sol.alpha * np.asarray(x, dtype=float) * density(sol, x, t) / np.asarray(t, dtype=float))


def normalization_integral(sol: SimilaritySolution, t: float) -> float:
    """Adaptive quadrature of ``density`` over the domain, split at the bulk of the mass."""
    _check_time(t)
    opts = dict(epsabs=1e-12, epsrel=1e-10, limit=200)

    def w(x):
        return density(sol, x, t)

    if sol.family == "gaussian":
        m, s = sol.mean(t), math.sqrt(sol.variance(t))
        pieces = [(-math.inf, m - 8 * s), (m - 8 * s, m + 8 * s), (m + 8 * s, math.inf)]
    else:
        m, s = abs(sol.mean(t)), math.sqrt(sol.variance(t))
        edge = m + 12 * s
        pieces = [(0.0, edge), (edge, math.inf)]
        if sol.domain == NONPOSITIVE:
            pieces = [(-b, -a) for a, b in pieces]
    return sum(integrate.quad(w, a, b, **opts)[0] for a, b in pieces)


@dataclass(frozen=True)
class ProfileStats:
    peak_location: float
    peak_value: float
    fwhm: float | None
    mean: float
    variance: float


def profile_stats(sol: SimilaritySolution, t: float) -> ProfileStats:
    _check_time(t)
    mean, var = float(sol.mean(t)), float(sol.variance(t))
    if sol.family == "gaussian":
        return ProfileStats(mean, 1.0 / math.sqrt(2 * math.pi * var), FWHM_FACTOR * math.sqrt(var), mean, var)
    if sol.family == "exponential":
        return ProfileStats(0.0, abs(float(sol.rate(t))), None, mean, var)
    r, k = float(sol.rate(t)), sol.shape
    mode = max(0.0, (k - 1.0) / r)
    return ProfileStats(mode, float(density(sol, mode, t)), None, mean, var)


def fwhm(sol: SimilaritySolution, t: float) -> float:
    if sol.family != "gaussian":
        raise UnsupportedStatisticError(f"FWHM is only defined here for the Gaussian family, not {sol.family}")
    return profile_stats(sol, t).fwhm


def crossing_time(mu1: float) -> float:
    """Time at which the constant- and linear-in-time-diffusion Gaussians with equal drift coincide."""
    if 1.0 - 2.0 * mu1 == 0.0:
        raise UndefinedCrossingError("crossing time is undefined for mu1 = 1/2")
    return 2.0 * (1.0 - mu1) / (1.0 - 2.0 * mu1)


def crossing_pair(mu1: float, mu4: float = 1.0) -> tuple[SimilaritySolution, SimilaritySolution]:
    """The ``alpha = 1/2`` and ``alpha = 1`` solutions with drift ``mu1 x/t`` compared by :func:`crossing_time`."""
    return gaussian_solution(0.5, mu1, 0.0, mu4), gaussian_solution(1.0, mu1, 0.0, mu4)


def apply_symmetry(sol: SimilaritySolution, transform: str, k: float | None = None) -> SimilaritySolution:
    """Parameter maps that mirror or preserve the density.

    ``mirror-mu2``: ``W'(x, t) = W(-x, t)`` (Gaussian, exponential).
    ``conjugate-params``: ``(mu1, mu2, mu4) -> (2 alpha - mu1, -mu2, -mu4)``, same density (Gaussian).
    ``ratio-rescale``: scale ``(mu2, mu4)`` or ``(mu2, mu3)`` by ``k`` keeping the
    density fixed (exponential, gamma).
    ``time-inversion``: ``(alpha, mu1) -> (-alpha, mu1 - 2 alpha)``; the image at ``1/t``
    equals the original at ``t`` (gamma).
    """
    fam = sol.family
    if transform == "mirror-mu2" and fam in ("gaussian", "exponential"):
        if fam == "gaussian":
            return gaussian_solution(sol.alpha, sol.mu1, -sol.mu2, sol.mu4)
        return exponential_solution(sol.alpha, -sol.mu2, sol.mu4)
    if transform == "conjugate-params" and fam == "gaussian":
        return gaussian_solution(sol.alpha, 2 * sol.alpha - sol.mu1, -sol.mu2, -sol.mu4)
    if transform == "ratio-rescale" and fam in ("exponential", "gamma"):
        if k is None or k == 0.0 or not math.isfinite(k):
            raise UnsupportedTransformError("ratio-rescale needs a finite nonzero factor k")
        if fam == "exponential":
            return exponential_solution(sol.alpha, k * sol.mu2, k * sol.mu4)
        return gamma_solution(sol.alpha, sol.alpha - k * (sol.alpha - sol.mu1), k * sol.mu2, k * sol.mu3)
    if transform == "time-inversion" and fam == "gamma":
        return gamma_solution(-sol.alpha, sol.mu1 - 2 * sol.alpha, sol.mu2, sol.mu3)
    if transform not in TRANSFORMS:
        raise UnsupportedTransformError(f"unknown transform {transform!r}")
    raise UnsupportedTransformError(f"{transform} does not apply to the {fam} family")

