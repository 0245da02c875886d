"""
Tests for the relation run and the parameter sweep.
"""

import math

import pytest

from orbitkernel.config import get_config
from orbitkernel.const import SWEEP_CSV_COLUMNS
from orbitkernel.errors import ConfigError
from orbitkernel.modules.harness import run_sweep, run_verify_relation, sweep_row, sweep_statistics
from orbitkernel.modules.kernels import KernelReport


def _report(t, residual, z=0.5, stderr=0.01, rhs=1.0, passed_quad=True):
    return KernelReport(
        lhs=rhs * (1.0 + residual),
        lhs_stderr=stderr,
        rhs=rhs,
        residual=residual,
        z=z,
        n_paths=1000,
        discards=2,
        hits=150,
        quad_converged=passed_quad,
        params={"t": t, "mu2kappa": 1.0, "start": (1.0, 0.5, 0.0)},
    )


class TestVerifyRelation:
    def test_registered_checks(self, quick_config):
        report, summary = run_verify_relation(quick_config)
        assert summary.title == "verify-relation"
        assert summary.names == ("relation_z", "quadrature")
        assert summary["relation_z"].residual == pytest.approx(abs(report.z))
        assert summary["quadrature"].passed
        assert report.include_jacobian
        assert report.n_paths == 20_000

    def test_seeded_runs_repeat(self, quick_config):
        first, _ = run_verify_relation(quick_config)
        second, _ = run_verify_relation(quick_config)
        assert first.to_dict() == second.to_dict()

    def test_nonzero_potential(self, quick_document):
        quick_document["sim"]["potential"] = {"c1": 0.5, "c2": 0.0}
        with pytest.raises(ConfigError):
            run_verify_relation(get_config(quick_document))

    def test_negative_control_is_registered(self, quick_document):
        quick_document["negative_control"] = True
        _, summary = run_verify_relation(get_config(quick_document))
        assert summary.names == ("relation_z", "quadrature", "negative_control")
        assert summary["negative_control"].at_least

    def test_negative_control_is_on_by_default(self, quick_document):
        del quick_document["negative_control"]
        assert get_config(quick_document).negative_control


@pytest.mark.slow
class TestVerifyRelationAtFullSize:
    def test_default_scenario_passes(self):
        report, summary = run_verify_relation(get_config())
        assert summary.passed
        assert abs(report.residual) < 0.05

    def test_controls(self):
        cfg = get_config({"negative_control": True, "grid": {"enabled": True}})
        _, summary = run_verify_relation(cfg)
        assert summary.names == ("relation_z", "quadrature", "negative_control", "grid_agreement")
        assert summary.passed, [r.name for r in summary.results if not r.passed]


class TestSweepRow:
    def test_column_order(self):
        row = sweep_row(_report(0.5, 0.01))
        assert len(row) == len(SWEEP_CSV_COLUMNS)
        values = dict(zip(SWEEP_CSV_COLUMNS, row))
        assert values["t"] == 0.5
        assert values["start_q_star"] == 1.0
        assert values["start_ft1"] == 0.5
        assert values["discards"] == 2
        assert values["passed"] == 1


class TestSweepStatistics:
    def test_single_time_has_no_slope(self):
        stats = sweep_statistics([_report(0.5, 0.01, z=-2.0), _report(0.5, 0.03, z=1.0)])
        assert stats["rows"] == 2
        assert stats["passed"] == 2
        assert stats["max_abs_z"] == 2.0
        assert stats["mean_residual"] == pytest.approx(0.02)
        assert "residual_slope" not in stats

    def test_linear_residual(self):
        reports = [_report(t, 0.1 * t) for t in (0.25, 0.5, 1.0)]
        stats = sweep_statistics(reports)
        assert stats["residual_slope"] == pytest.approx(0.1)
        assert stats["residual_slope_stderr"] > 0.0

    def test_failed_rows_are_counted(self):
        stats = sweep_statistics([_report(0.5, 0.0, z=4.0), _report(1.0, 0.0, passed_quad=False)])
        assert stats["passed"] == 0
        assert stats["residual_slope"] == 0.0

    def test_nan_residual_propagates(self):
        stats = sweep_statistics([_report(0.5, math.nan)])
        assert math.isnan(stats["mean_residual"])


class TestSweep:
    def test_grid_of_points(self, quick_document):
        quick_document["sweep"] = {"t": [0.4, 0.6], "mu2kappa": [1.0], "start": [[1.0, 0.5, 0.0]]}
        reports, stats, summary = run_sweep(get_config(quick_document))
        assert [report.params["t"] for report in reports] == [0.4, 0.6]
        assert stats["rows"] == 2
        assert summary.names == ("row_0", "row_1", "residual_slope")

    def test_invalid_point(self, quick_document):
        quick_document["sweep"] = {"t": [0.5], "mu2kappa": [1.0], "start": [[-1.0, 0.5, 0.0]]}
        with pytest.raises(ConfigError):
            run_sweep(get_config(quick_document))
