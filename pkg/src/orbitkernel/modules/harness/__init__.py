"""
Verification harness.

Provides:
- Check suites for the geometry, generator and sde modules
- The relation run and the parameter sweep
- JSON and CSV report rendering
"""

from orbitkernel.modules.harness.checks import (
    GENERATOR_CHECKS,
    GEOMETRY_CHECKS,
    RESIDUAL_KINDS,
    SDE_CHECKS,
    CheckResult,
    CheckSummary,
    measure,
    run_generator_check,
    run_geometry_check,
    run_sde_check,
    sample_adapted_points,
)
from orbitkernel.modules.harness.reports import build_document, render_csv, render_json, write_output
from orbitkernel.modules.harness.runs import run_sweep, run_verify_relation, sweep_row, sweep_statistics

__all__ = [
    # Checks
    "GENERATOR_CHECKS",
    "GEOMETRY_CHECKS",
    "RESIDUAL_KINDS",
    "SDE_CHECKS",
    "CheckResult",
    "CheckSummary",
    "measure",
    "run_generator_check",
    "run_geometry_check",
    "run_sde_check",
    "sample_adapted_points",
    # Runs
    "run_sweep",
    "run_verify_relation",
    "sweep_row",
    "sweep_statistics",
    # Reports
    "build_document",
    "render_csv",
    "render_json",
    "write_output",
]
