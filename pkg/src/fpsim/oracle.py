"""Independent numerical checks of the closed forms.

``fd_evolve`` integrates the full time-dependent equation in flux form
``dW/dt = -dJ/dx`` with ``J = D1 W - d(D2 W)/dx`` on a uniform node grid.
Each node owns a control volume (half volumes at the two end nodes), so the
trapezoidal integral of the node values is the conserved mass.  Boundary faces
carry zero flux.  Time stepping is Crank-Nicolson with the coefficients frozen
at the half step.

``mc_sample`` runs Euler-Maruyama on ``dx = D1 dt + sqrt(2 D2) dB`` (Ito),
reflecting at the origin on half-line domains.  Uniforms come from numpy's
counter-based Philox generator keyed by the seed and are mapped to normals by
the inverse normal CDF, so a seed fixes the ensemble bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special
from scipy.linalg import solve_banded

from .profiles import NONNEGATIVE, NONPOSITIVE
from .scaling import CoefficientPair
from .solutions import SimilaritySolution, density, quantile

PECLET_LIMIT = 100.0
NEGATIVE_TOL = 1e-12

L1_TOLERANCE = {"gaussian": 1e-3, "exponential": 1e-3, "gamma": 5e-3}
KS_TOLERANCE = {"gaussian": 0.01, "exponential": 0.01, "gamma": 0.02}


class IllPosedDiffusionError(ValueError):
    pass


class ResolutionError(ValueError):
    pass


class IncompatibleGridsError(ValueError):
    pass


@dataclass(frozen=True)
class GridDensity:
    x_min: float
    x_max: float
    n: int
    values: np.ndarray = field(repr=False)
    time: float
    clip_count: int = 0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if self.n < 16 or values.shape != (self.n,):
            raise ValueError(f"grid needs n >= 16 values, got n={self.n}, shape {values.shape}")
        if not self.x_min < self.x_max:
            raise ValueError("grid needs x_min < x_max")
        if not self.time > 0:
            raise ValueError("grid time must be positive")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("grid values must be finite and non-negative")
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    def mass(self) -> float:
        return float(np.trapezoid(self.values, dx=self.dx))


def sample_solution(sol: SimilaritySolution, t: float, x_min: float, x_max: float, n: int) -> GridDensity:
    x = np.linspace(x_min, x_max, n)
    return GridDensity(x_min, x_max, n, density(sol, x, t), t)


def _operator_bands(pair: CoefficientPair, x: np.ndarray, t: float, h: float):
    """Bands of ``A`` in ``dW/dt = A W`` for the node finite-volume discretization."""
    d2 = np.asarray(pair.diffusion(x, t), dtype=float) * np.ones_like(x)
    xf = 0.5 * (x[:-1] + x[1:])
    d1 = np.asarray(pair.drift(xf, t), dtype=float) * np.ones_like(xf)

    interior = d2[1:-1]
    if np.any(interior <= 0):
        bad = x[1:-1][interior <= 0][0]
        raise IllPosedDiffusionError(f"diffusion {pair.diffusion(bad, t)!r} <= 0 at x={bad:g}, t={t:g}")
    d2_face = 0.5 * (d2[:-1] + d2[1:])
    peclet = np.abs(d1) * h / d2_face
    if np.max(peclet) > PECLET_LIMIT:
        raise ResolutionError(
            f"cell Peclet number {np.max(peclet):.3g} exceeds {PECLET_LIMIT:g} at t={t:g}; refine the grid"
        )

    # face flux F_{j+1/2} = a_j W_j + b_j W_{j+1}
    a = 0.5 * d1 + d2[:-1] / h
    b = 0.5 * d1 - d2[1:] / h
    vol = np.full(x.size, h)
    vol[0] = vol[-1] = 0.5 * h

    n = x.size
    diag = np.zeros(n)
    upper = np.zeros(n - 1)  # A[j, j+1]
    lower = np.zeros(n - 1)  # A[j+1, j]
    # node j loses F_{j+1/2}; node j+1 gains it
    diag[:-1] -= a / vol[:-1]
    upper -= b / vol[:-1]
    lower += a / vol[1:]
    diag[1:] += b / vol[1:]
    return lower, diag, upper


def fd_evolve(pair: CoefficientPair, w0: GridDensity, t1: float, n_steps: int) -> GridDensity:
    if not t1 > w0.time > 0:
        raise ValueError("fd_evolve needs t1 > w0.time > 0")
    if n_steps < 1:
        raise ValueError("n_steps must be positive")
    x = w0.x
    h = w0.dx
    dt = (t1 - w0.time) / n_steps
    vol = np.full(x.size, h)
    vol[0] = vol[-1] = 0.5 * h

    w = w0.values.copy()
    mass0 = float(vol @ w)
    clips = w0.clip_count
    ab = np.zeros((3, x.size))
    for step in range(n_steps):
        t_half = w0.time + (step + 0.5) * dt
        lower, diag, upper = _operator_bands(pair, x, t_half, h)
        rhs = w + 0.5 * dt * (diag * w)
        rhs[:-1] += 0.5 * dt * upper * w[1:]
        rhs[1:] += 0.5 * dt * lower * w[:-1]
        ab[0, 1:] = -0.5 * dt * upper
        ab[1] = 1.0 - 0.5 * dt * diag
        ab[2, :-1] = -0.5 * dt * lower
        w = solve_banded((1, 1), ab, rhs, check_finite=False)
        if np.any(w < 0):
            if np.any(w < -NEGATIVE_TOL):
                clips += 1
            w = np.maximum(w, 0.0)
            w *= mass0 / float(vol @ w)
    return GridDensity(w0.x_min, w0.x_max, w0.n, w, t1, clips)


@dataclass(frozen=True)
class PathEnsemble:
    n_paths: int
    terminal_positions: np.ndarray = field(repr=False)
    t0: float
    t1: float
    dt: float
    seed: int


def _uniforms(gen: np.random.Generator, n: int) -> np.ndarray:
    # open interval (0, 1): shift the 53-bit lattice by half a step
    return gen.random(n) + 2.0**-54


def mc_sample(
    pair: CoefficientPair,
    initial: SimilaritySolution,
    t0: float,
    t1: float,
    n_paths: int,
    dt: float,
    seed: int,
) -> PathEnsemble:
    if not t1 > t0 > 0:
        raise ValueError("mc_sample needs t1 > t0 > 0")
    if n_paths < 10_000:
        raise ValueError("mc_sample needs at least 10^4 paths")
    if dt > (t1 - t0) / 100 * (1 + 1e-12):
        raise ValueError("dt must be at most (t1 - t0)/100")
    n_steps = math.ceil((t1 - t0) / dt - 1e-9)
    step = (t1 - t0) / n_steps

    gen = np.random.Generator(np.random.Philox(key=seed))
    x = np.asarray(quantile(initial, _uniforms(gen, n_paths), t0), dtype=float)
    reflect = {NONNEGATIVE: 1.0, NONPOSITIVE: -1.0}.get(initial.domain)
    sq = math.sqrt(step)
    for i in range(n_steps):
        t = t0 + i * step
        d2 = np.asarray(pair.diffusion(x, t), dtype=float)
        if np.any(d2 < 0):
            raise IllPosedDiffusionError(f"negative diffusion {d2.min():g} at t={t:g}")
        noise = special.ndtri(_uniforms(gen, n_paths))
        x = x + pair.drift(x, t) * step + np.sqrt(2.0 * d2) * sq * noise
        if reflect is not None:
            x = reflect * np.abs(x)
    return PathEnsemble(n_paths, x, t0, t1, step, seed)


def l1_distance(g1: GridDensity, g2: GridDensity) -> float:
    if (g1.x_min, g1.x_max, g1.n) != (g2.x_min, g2.x_max, g2.n) or not math.isclose(
        g1.time, g2.time, rel_tol=1e-12
    ):
        raise IncompatibleGridsError("l1_distance needs identical grids and times")
    return float(np.trapezoid(np.abs(g1.values - g2.values), dx=g1.dx))


def ks_statistic(sample, cdf: Callable) -> float:
    """Kolmogorov-Smirnov distance between the empirical CDF of ``sample`` and ``cdf``.

    ``sample`` is a :class:`PathEnsemble` or an array of draws; ``cdf`` must accept arrays.
    """
    xs = np.sort(np.asarray(getattr(sample, "terminal_positions", sample), dtype=float))
    n = xs.size
    f = np.asarray(cdf(xs), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))
