"""
Kernel runs: the single relation check and the Cartesian sweep.
"""

import logging
from dataclasses import replace

import numpy as np

from orbitkernel.const import NEGATIVE_CONTROL_Z_MIN, RELATION_Z_MAX, SWEEP_CSV_COLUMNS
from orbitkernel.errors import ConfigError
from orbitkernel.modules.geometry.points import BasePoint
from orbitkernel.modules.harness.checks import CheckSummary, measure
from orbitkernel.modules.kernels.relation import verify_reduction_relation

logger = logging.getLogger(__name__)

# Grid and Monte Carlo left sides agree within this relative margin plus three standard errors
GRID_AGREEMENT_RTOL = 0.02


def run_verify_relation(cfg, threads=None):
    """
    Check the reduction relation on the configured query.

    Registered checks: relation_z and quadrature; negative_control unless
    cfg.negative_control is switched off; grid_agreement when the grid is
    enabled.

    Args:
        cfg: RunConfig
        threads: Worker count

    Returns:
        Tuple (KernelReport, CheckSummary)
    """
    if not cfg.sim.potential.is_zero:
        raise ConfigError("verify-relation needs the zero potential")
    report = verify_reduction_relation(cfg.query, grid=cfg.grid, threads=threads)
    results = [
        measure("relation_z", RELATION_Z_MAX, lambda: abs(report.z), kind="z"),
        measure("quadrature", 0.5, lambda: float(report.quad_converged), at_least=True, kind="flag"),
    ]
    if cfg.negative_control:
        control = verify_reduction_relation(cfg.query, include_jacobian=False, threads=threads)
        logger.info("negative control: z %.2f", control.z)
        results.append(
            measure("negative_control", NEGATIVE_CONTROL_Z_MIN, lambda: abs(control.z), at_least=True, kind="z")
        )
    if report.grid_lhs is not None:
        margin = GRID_AGREEMENT_RTOL * abs(report.lhs) + RELATION_Z_MAX * report.lhs_stderr
        results.append(
            measure("grid_agreement", 1.0, lambda: abs(report.grid_lhs - report.lhs) / margin, kind="relative")
        )
    return report, CheckSummary("verify-relation", tuple(results))


def sweep_row(report):
    """One CSV row in SWEEP_CSV_COLUMNS order."""
    params = report.params
    start = params["start"]
    values = {
        "t": params["t"],
        "mu2kappa": params["mu2kappa"],
        "start_q_star": start[0],
        "start_ft1": start[1],
        "start_ft2": start[2],
        "lhs": report.lhs,
        "lhs_stderr": report.lhs_stderr,
        "rhs": report.rhs,
        "residual": report.residual,
        "z": report.z,
        "n_paths": report.n_paths,
        "discards": report.discards,
        "passed": int(report.passed),
    }
    return [values[column] for column in SWEEP_CSV_COLUMNS]


def sweep_statistics(reports):
    """
    Summary lines of a sweep: counts, worst |z|, mean residual and, over
    at least two distinct t values, the slope of the residual in t with its
    standard error.
    """
    z = np.array([report.z for report in reports])
    residual = np.array([report.residual for report in reports])
    times = np.array([report.params["t"] for report in reports])
    stats = {
        "rows": len(reports),
        "passed": int(sum(report.passed for report in reports)),
        "max_abs_z": float(np.max(np.abs(z))),
        "mean_residual": float(np.mean(residual)),
    }
    if len(np.unique(times)) >= 2:
        stderr = np.array([report.lhs_stderr / report.rhs for report in reports])
        weights = 1.0 / np.maximum(stderr, np.finfo(float).tiny) ** 2
        centered = times - np.average(times, weights=weights)
        slope = float(np.sum(weights * centered * residual) / np.sum(weights * centered**2))
        stats["residual_slope"] = slope
        stats["residual_slope_stderr"] = float(1.0 / np.sqrt(np.sum(weights * centered**2)))
    return stats


def run_sweep(cfg, threads=None):
    """
    Cartesian sweep over t, lambda and start points, one relation check each.

    Args:
        cfg: RunConfig; cfg.sweep holds the expanded lists

    Returns:
        Tuple (list of KernelReport, statistics dict, CheckSummary)
    """
    sweep = cfg.sweep
    reports = []
    for t in sweep["t"]:
        for lam in sweep["mu2kappa"]:
            for start in sweep["start"]:
                try:
                    params = replace(cfg.sim, mu2kappa=lam)
                    query = replace(cfg.query, start=BasePoint(*start), t=t, params=params)
                except ValueError as exc:
                    raise ConfigError(f"invalid sweep point t={t}, mu2kappa={lam}, start={start}: {exc}") from exc
                logger.info("sweep: t=%g mu2kappa=%g start=%s", t, lam, start)
                reports.append(verify_reduction_relation(query, threads=threads))

    stats = sweep_statistics(reports)
    results = [
        measure(f"row_{i}", RELATION_Z_MAX, lambda r=report: abs(r.z), kind="z") for i, report in enumerate(reports)
    ]
    if "residual_slope" in stats:
        results.append(
            measure(
                "residual_slope",
                2.0,
                lambda: abs(stats["residual_slope"]) / stats["residual_slope_stderr"],
                kind="z",
            )
        )
    return reports, stats, CheckSummary("sweep", tuple(results))
