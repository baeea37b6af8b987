"""Semiclassical section sequences on toric varieties.

Rational coordinates are passed as strings such as "1/3"; lattice points as
lists of ints.
"""

from ._core import (
    BoxTooSmall,
    FacetPolytope,
    MetricPotential,
    NonConvergence,
    NumericError,
    RetryAtLargerN,
    SectionSequence,
    ValidationError,
    curve_limit,
    cut_bound,
    digamma,
    euclidean_chart_integral,
    f_N_eval,
    face_minimize,
    fit_log_law,
    fit_power_law,
    gamma_derivative,
    log_density_point,
    log_norm_sq,
    minimize,
    parse_config,
    run,
    tail_volume,
    term_transform_exact,
    trigamma,
    truncated_transform,
    weak_convergence_test,
)

__all__ = [name for name in dir() if not name.startswith("_")]
