"""
orbitkernel - SO(2) reduction of Wiener path integrals on R^2 x R^2

Adapted bundle geometry, reduced generators, the reduced diffusions and a
Monte Carlo check of the reduction relation between heat kernels.
"""

__version__ = "0.4.0"

from orbitkernel.config import get_config
from orbitkernel.modules.geometry import (
    AdaptedPoint,
    BasePoint,
    EuclideanPoint,
    from_adapted,
    geometry_at,
    group_act,
    to_adapted,
)
from orbitkernel.modules.harness import run_verify_relation
from orbitkernel.modules.kernels import (
    Box,
    KernelQuery,
    KernelReport,
    orbit_average_rhs,
    reduced_kernel_grid,
    reduced_kernel_mc,
    verify_reduction_relation,
)
from orbitkernel.modules.sde import SimParams, simulate_batch


def verify_relation(config=None, threads=None, **overrides):
    """
    Check the n = 0 reduction relation in one call.

    Args:
        config: Path to a JSON document, a dict, a RunConfig or None for defaults
        threads: Worker count, default from ORBITKERNEL_THREADS or 1
        overrides: seed, output_path, format

    Returns:
        KernelReport

    Examples:
        >>> report = verify_relation({"sim": {"n_paths": 200_000}}, seed=7)
        >>> report.passed
        True
    """
    cfg = get_config(config, command="verify-relation", **overrides)
    report, _ = run_verify_relation(cfg, threads=threads)
    return report


__all__ = [
    "__version__",
    "verify_relation",
    # Geometry
    "AdaptedPoint",
    "BasePoint",
    "EuclideanPoint",
    "from_adapted",
    "geometry_at",
    "group_act",
    "to_adapted",
    # Simulation
    "SimParams",
    "simulate_batch",
    # Kernels
    "Box",
    "KernelQuery",
    "KernelReport",
    "orbit_average_rhs",
    "reduced_kernel_grid",
    "reduced_kernel_mc",
    "verify_reduction_relation",
    # Configuration
    "get_config",
]
