"""Spectral solver for the linear state-based peridynamic operator on the torus."""

from ._perispec import (
    Material,
    NumericalError,
    Operator,
    SpectralField,
    TimeSolution,
    ValidationError,
    apply_operator,
    asymptotic_validation,
    decay_exponent_fit,
    eigenvalues,
    eigenvalues_exact,
    eigenvalues_quadrature,
    evolve_forced,
    evolve_homogeneous,
    field_from_json,
    growth_class,
    lambda1_asymptotic_combined,
    lambda2_asymptotic,
    local_limit_sweep,
    make_decay_field,
    make_random_field,
    multiplier_dense,
    navier_dense,
    predicted_regularity,
    regularity_study,
    scaling_constant,
    sobolev_norm,
    solve_equilibrium,
    synthesize,
    temporal_consistency_check,
    validate_negativity,
)

__all__ = [
    "Material",
    "NumericalError",
    "Operator",
    "SpectralField",
    "TimeSolution",
    "ValidationError",
    "apply_operator",
    "asymptotic_validation",
    "decay_exponent_fit",
    "eigenvalues",
    "eigenvalues_exact",
    "eigenvalues_quadrature",
    "evolve_forced",
    "evolve_homogeneous",
    "field_from_json",
    "growth_class",
    "lambda1_asymptotic_combined",
    "lambda2_asymptotic",
    "local_limit_sweep",
    "make_decay_field",
    "make_random_field",
    "multiplier_dense",
    "navier_dense",
    "predicted_regularity",
    "regularity_study",
    "scaling_constant",
    "sobolev_norm",
    "solve_equilibrium",
    "synthesize",
    "temporal_consistency_check",
    "validate_negativity",
]
