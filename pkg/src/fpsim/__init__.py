"""Similarity solutions of 1+1 dimensional Fokker-Planck equations with time-dependent coefficients."""
from .profiles import (
    FULL_LINE,
    NONNEGATIVE,
    NONPOSITIVE,
    DomainInterval,
    Profile,
    derivative,
    evaluate,
    make_generic,
    make_polynomial,
    make_rational,
    shape_function,
)
from .scaling import (
    CoefficientPair,
    ScalingExponents,
    similarity_variable,
    solve_exponents,
    synthesize_coefficients,
    verify_scale_invariance,
)
from .reduction import first_integral, ode_residual, reduce, solve_shape
from .solutions import (
    SimilaritySolution,
    apply_symmetry,
    crossing_time,
    current,
    density,
    exponential_solution,
    gamma_solution,
    gaussian_solution,
    profile_stats,
)
from .oracle import GridDensity, PathEnsemble, fd_evolve, ks_statistic, l1_distance, mc_sample
from .qes import QesClass1Params, QesOde, fpe_reducible, qes_class1

__version__ = "0.1.0"
