"""Scale-invariant profiles of the similarity variable ``z``.

A profile is either a dense polynomial (ascending powers), an unreduced
rational function, or an opaque callable with a declared domain.  The
symbolic operations (derivative, shape function) are total on the first two
kinds and reject the third.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

MAX_DEGREE = 8
POLE_THRESHOLD = 1e-300


class ProfileError(ValueError):
    """Invalid profile input."""


class PoleError(ArithmeticError):
    def __init__(self, z):
        super().__init__(f"denominator vanishes at z={z!r}")
        self.z = z


class UnsupportedOperationError(TypeError):
    pass


class DegenerateDiffusionError(ValueError):
    pass


@dataclass(frozen=True)
class DomainInterval:
    lower: float
    upper: float
    kind: str

    def __post_init__(self):
        expected = {
            "full-line": (-math.inf, math.inf),
            "half-line-nonnegative": (0.0, math.inf),
            "half-line-nonpositive": (-math.inf, 0.0),
        }
        if self.kind not in expected:
            raise ProfileError(f"unknown domain kind {self.kind!r}")
        if not self.lower < self.upper:
            raise ProfileError("domain requires lower < upper")
        if (self.lower, self.upper) != expected[self.kind]:
            raise ProfileError(f"bounds ({self.lower}, {self.upper}) inconsistent with {self.kind}")

    def contains(self, x):
        return (x >= self.lower) & (x <= self.upper)

    @property
    def is_half_line(self) -> bool:
        return self.kind != "full-line"


FULL_LINE = DomainInterval(-math.inf, math.inf, "full-line")
NONNEGATIVE = DomainInterval(0.0, math.inf, "half-line-nonnegative")
NONPOSITIVE = DomainInterval(-math.inf, 0.0, "half-line-nonpositive")


# -- dense polynomial helpers (ascending powers, tuples of floats) ----------

def _canon(coeffs: Sequence[float]) -> tuple[float, ...]:
    c = [float(v) for v in coeffs]
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    return tuple(c) if c else (0.0,)


def poly_add(p, q):
    n = max(len(p), len(q))
    return _canon([(p[i] if i < len(p) else 0.0) + (q[i] if i < len(q) else 0.0) for i in range(n)])


def poly_scale(p, k):
    return _canon([k * v for v in p])


def poly_sub(p, q):
    return poly_add(p, poly_scale(q, -1.0))


def poly_mul(p, q):
    out = [0.0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _canon(out)


def poly_deriv(p):
    if len(p) == 1:
        return (0.0,)
    return _canon([i * p[i] for i in range(1, len(p))])


def poly_eval(p, z):
    """Horner evaluation; ``z`` may be a scalar or an ndarray."""
    acc = p[-1] * np.ones_like(z, dtype=float) if isinstance(z, np.ndarray) else p[-1]
    for c in reversed(p[:-1]):
        acc = acc * z + c
    return acc


def poly_is_zero(p, tol: float = 0.0) -> bool:
    return all(abs(v) <= tol for v in p)


def poly_equal(p, q, tol: float = 1e-12) -> bool:
    return poly_is_zero(poly_sub(p, q), tol)


@dataclass(frozen=True)
class Profile:
    """A scale-invariant function of ``z``.

    Use :func:`make_polynomial`, :func:`make_rational` or :func:`make_generic`
    rather than constructing directly.
    """

    kind: str
    coefficients: tuple[float, ...] = ()
    numerator: tuple[float, ...] = ()
    denominator: tuple[float, ...] = ()
    evaluator: Callable | None = field(default=None, compare=False)
    domain: DomainInterval = FULL_LINE

    @property
    def degree(self) -> int:
        if self.kind != "polynomial":
            raise UnsupportedOperationError("degree is defined for polynomial profiles only")
        return len(self.coefficients) - 1

    @property
    def is_symbolic(self) -> bool:
        return self.kind in ("polynomial", "rational")

    def is_zero(self) -> bool:
        if self.kind == "polynomial":
            return poly_is_zero(self.coefficients)
        if self.kind == "rational":
            return poly_is_zero(self.numerator)
        raise UnsupportedOperationError("cannot decide whether a generic profile is zero")

    def __call__(self, z):
        return evaluate(self, z)

    def __repr__(self):
        if self.kind == "polynomial":
            return f"Profile(polynomial {list(self.coefficients)})"
        if self.kind == "rational":
            return f"Profile(rational {list(self.numerator)} / {list(self.denominator)})"
        return f"Profile(generic on {self.domain.kind})"

    def derivative(self) -> "Profile":
        return derivative(self)

    def as_rational(self) -> tuple[tuple[float, ...], tuple[float, ...]]:
        if self.kind == "polynomial":
            return self.coefficients, (1.0,)
        if self.kind == "rational":
            return self.numerator, self.denominator
        raise UnsupportedOperationError("generic profiles have no rational form")


def make_polynomial(coeffs: Sequence[float]) -> Profile:
    coeffs = list(coeffs)
    if not coeffs:
        raise ProfileError("polynomial needs at least one coefficient")
    if not all(math.isfinite(float(c)) for c in coeffs):
        raise ProfileError(f"non-finite coefficient in {coeffs!r}")
    c = _canon(coeffs)
    if len(c) - 1 > MAX_DEGREE:
        raise ProfileError(f"degree {len(c) - 1} exceeds cap {MAX_DEGREE}")
    return Profile("polynomial", coefficients=c)


def _poly_profile(c) -> Profile:
    # internal results (products, derivatives) are exempt from the degree cap
    return Profile("polynomial", coefficients=_canon(c))


def make_rational(numerator: Sequence[float], denominator: Sequence[float]) -> Profile:
    num = make_polynomial(numerator).coefficients
    den = make_polynomial(denominator).coefficients
    if poly_is_zero(den):
        raise ProfileError("rational denominator is the zero polynomial")
    return Profile("rational", numerator=num, denominator=den)


def make_generic(evaluator: Callable, domain: DomainInterval = FULL_LINE) -> Profile:
    if not callable(evaluator):
        raise ProfileError("generic profile needs a callable evaluator")
    return Profile("generic", evaluator=evaluator, domain=domain)


def evaluate(p: Profile, z):
    """Evaluate ``p`` at ``z`` (scalar or ndarray).

    Raises :class:`PoleError` if a rational denominator vanishes at ``z``.
    """
    if p.kind == "polynomial":
        return poly_eval(p.coefficients, z)
    if p.kind == "rational":
        den = poly_eval(p.denominator, z)
        bad = np.abs(den) < POLE_THRESHOLD
        if np.any(bad):
            where = np.asarray(z)[bad] if np.ndim(z) else z
            raise PoleError(where if np.ndim(z) == 0 else where[0])
        return poly_eval(p.numerator, z) / den
    if not np.all(p.domain.contains(z)):
        raise ProfileError(f"z={z!r} outside declared domain {p.domain.kind}")
    return p.evaluator(z)


def derivative(p: Profile) -> Profile:
    if p.kind == "polynomial":
        return _poly_profile(poly_deriv(p.coefficients))
    if p.kind == "rational":
        n, d = p.numerator, p.denominator
        num = poly_sub(poly_mul(poly_deriv(n), d), poly_mul(n, poly_deriv(d)))
        return Profile("rational", numerator=num, denominator=poly_mul(d, d))
    raise UnsupportedOperationError(
        "generic profiles have no symbolic derivative; differentiate numerically instead"
    )


def central_difference(fn: Callable, z, rel_step: float = 1e-5):
    h = rel_step * (np.abs(z) + 1.0)
    return (fn(z + h) - fn(z - h)) / (2.0 * h)


def shape_function(rho1: Profile, rho2: Profile, alpha: float) -> Profile:
    """Logarithmic derivative ``f = (rho1 - rho2' - alpha*z) / rho2`` of the profile ``y``."""
    if not math.isfinite(alpha) or alpha == 0.0:
        raise ProfileError("alpha must be finite and nonzero")
    if rho2.is_symbolic and rho2.is_zero():
        raise DegenerateDiffusionError("rho2 is identically zero")

    if rho1.kind == "polynomial" and rho2.kind == "polynomial":
        num = poly_sub(poly_sub(rho1.coefficients, poly_deriv(rho2.coefficients)), (0.0, alpha))
        return Profile("rational", numerator=num, denominator=rho2.coefficients)

    if rho1.is_symbolic and rho2.is_symbolic:
        n1, d1 = rho1.as_rational()
        n2, d2 = rho2.as_rational()
        dn2, dd2 = derivative(rho2).as_rational()
        # common denominator d1 * dd2, then divide by n2/d2
        top = poly_sub(
            poly_sub(poly_mul(n1, dd2), poly_mul(dn2, d1)),
            poly_mul((0.0, alpha), poly_mul(d1, dd2)),
        )
        return Profile("rational", numerator=poly_mul(top, d2), denominator=poly_mul(poly_mul(d1, dd2), n2))

    def f(z):
        r2 = evaluate(rho2, z)
        d2 = evaluate(derivative(rho2), z) if rho2.is_symbolic else central_difference(rho2, z)
        return (evaluate(rho1, z) - d2 - alpha * z) / r2

    domain = rho2.domain if rho2.kind == "generic" else rho1.domain
    return make_generic(f, domain)
