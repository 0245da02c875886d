"""
Differential generators applied to test fields.

Provides:
- Scalar test fields and the finite-difference scheme
- The reduced, flat-lifted and orbit Laplace-Beltrami operators
- Equivariance residuals, drift gaps and filtering-rate identities
"""

from orbitkernel.modules.generators.fields import (
    FDScheme,
    ScalarField,
    affine,
    constant,
    coordinate,
    gaussian_bump,
    log_killing_norm,
    monomial,
    quadratic_sum,
    standard_family,
)
from orbitkernel.modules.generators.operators import (
    apply_flat_laplacian_lifted,
    apply_lb_orbit,
    apply_reduced_generator,
    dhat_rate,
    dhat_rate_via_ito,
    drift_gap,
    equivariance_residual,
    fourier_coefficient,
    jacobian_potential_fd,
    jacobian_scalar_fd,
    orbit_drift,
    reduced_drift,
)

__all__ = [
    # Fields
    "FDScheme",
    "ScalarField",
    "affine",
    "constant",
    "coordinate",
    "gaussian_bump",
    "log_killing_norm",
    "monomial",
    "quadratic_sum",
    "standard_family",
    # Operators
    "apply_flat_laplacian_lifted",
    "apply_lb_orbit",
    "apply_reduced_generator",
    "dhat_rate",
    "dhat_rate_via_ito",
    "drift_gap",
    "equivariance_residual",
    "fourier_coefficient",
    "jacobian_potential_fd",
    "jacobian_scalar_fd",
    "orbit_drift",
    "reduced_drift",
]
