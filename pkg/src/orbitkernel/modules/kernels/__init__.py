"""
Both sides of the reduction relation.

Provides:
- The flat heat kernel and its orbit average (quadrature and closed form)
- Monte Carlo and grid estimates of the reduced kernel over a box
- The relation check producing a KernelReport
"""

from orbitkernel.modules.kernels.flat import (
    closed_form_orbit_average,
    flat_heat_kernel,
    orbit_average_at,
    orbit_average_rhs,
)
from orbitkernel.modules.kernels.grid import GridSolution, GridSpec, reduced_kernel_grid, solve_grid
from orbitkernel.modules.kernels.montecarlo import MCEstimate, reduced_kernel_mc
from orbitkernel.modules.kernels.query import Box, KernelQuery, KernelReport
from orbitkernel.modules.kernels.relation import d_factor, verify_reduction_relation

__all__ = [
    # Queries
    "Box",
    "KernelQuery",
    "KernelReport",
    # Flat side
    "closed_form_orbit_average",
    "flat_heat_kernel",
    "orbit_average_at",
    "orbit_average_rhs",
    # Reduced side
    "GridSolution",
    "GridSpec",
    "MCEstimate",
    "reduced_kernel_grid",
    "reduced_kernel_mc",
    "solve_grid",
    # Relation
    "d_factor",
    "verify_reduction_relation",
]
