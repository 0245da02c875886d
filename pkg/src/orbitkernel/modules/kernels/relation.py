"""
Both sides of the n = 0 reduction relation

    d_b^{-1/4} d_a^{-1/4} G_M(x_b, x_a, t) = (1/2pi) int G_P(theta x_b, x_a, t) d theta

compared on a query box.
"""

import logging
import math

from orbitkernel.const import N_GROUPS
from orbitkernel.errors import ConfigError, QuadratureNotConverged
from orbitkernel.modules.kernels.flat import orbit_average_rhs
from orbitkernel.modules.kernels.grid import reduced_kernel_grid
from orbitkernel.modules.kernels.montecarlo import reduced_kernel_mc
from orbitkernel.modules.kernels.query import KernelReport

logger = logging.getLogger(__name__)


def d_factor(query):
    """d_a^{-1/4} d_b^{-1/4} with d_b at the box center."""
    return (query.start.d * query.box.center_point.d) ** -0.25


def verify_reduction_relation(query, include_jacobian=True, grid=None, n_groups=N_GROUPS, threads=None):
    """
    Estimate the left side by Monte Carlo and compare it with the orbit average.

    Args:
        query: KernelQuery with a zero potential
        include_jacobian: Keep J in the path weight; False is the negative control
        grid: Optional GridSpec; adds the grid-solver left side to the report
        n_groups: Batch-means groups
        threads: Worker count

    Returns:
        KernelReport

    Raises:
        ConfigError: If the potential is not zero
        InsufficientSamples: If too few endpoints land in the box
    """
    if not query.params.potential.is_zero:
        raise ConfigError("the reduction relation is checked with V = 0 only")

    factor = d_factor(query)
    mc = reduced_kernel_mc(query, include_jacobian, n_groups=n_groups, threads=threads)
    lhs = factor * mc.estimate
    stderr = factor * mc.stderr

    try:
        rhs = orbit_average_rhs(query)
        converged = True
    except QuadratureNotConverged as exc:
        logger.warning("%s", exc)
        rhs = math.nan
        converged = False

    grid_lhs = None
    if grid is not None:
        grid_lhs = factor * reduced_kernel_grid(query, grid)

    residual = (lhs - rhs) / rhs
    z = (lhs - rhs) / stderr if stderr > 0.0 else math.inf
    logger.info("relation: lhs %.6g +- %.2g, rhs %.6g, residual %.3g, z %.2f", lhs, stderr, rhs, residual, z)

    params = query.params.to_dict()
    params.update(query.to_dict())
    if grid is not None:
        params["grid"] = grid.to_dict()
    return KernelReport(
        lhs=lhs,
        lhs_stderr=stderr,
        rhs=rhs,
        residual=residual,
        z=z,
        n_paths=mc.n_paths,
        discards=mc.discards,
        hits=mc.hits,
        quad_converged=converged,
        include_jacobian=include_jacobian,
        grid_lhs=grid_lhs,
        params=params,
    )
