"""Python bindings for the bayesmv C++ library."""

from ._bayesmv import (
    DomainError,
    ModelParams,
    VerificationError,
    alpha,
    conviction_check,
    curvature_A,
    eta,
    frontier_sweep,
    gamma,
    gaussian_foc_check,
    hjb_residual,
    martingale_diagnostic,
    optimal_policy,
    posterior_variance,
    riccati_residuals,
    simulate_controlled,
    simulate_filter_paths,
    simulate_filter_terminal,
    value,
    zeta,
)

__all__ = [
    "DomainError",
    "ModelParams",
    "VerificationError",
    "alpha",
    "conviction_check",
    "curvature_A",
    "eta",
    "frontier_sweep",
    "gamma",
    "gaussian_foc_check",
    "hjb_residual",
    "martingale_diagnostic",
    "optimal_policy",
    "posterior_variance",
    "riccati_residuals",
    "simulate_controlled",
    "simulate_filter_paths",
    "simulate_filter_terminal",
    "value",
    "zeta",
]
