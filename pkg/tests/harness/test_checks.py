"""
Tests for the identity suites and their result containers.
"""

import pytest

from orbitkernel.config import get_config
from orbitkernel.const import EXIT_CHECK_FAILED, EXIT_OK, JACOBIAN_RTOL
from orbitkernel.modules.harness import (
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


def _with_checks(document, **values):
    document["checks"].update(values)
    return get_config(document)


class TestMeasure:
    MEASURE_CASES = {
        "below": (0.5, 1.0, False, True),
        "above": (2.0, 1.0, False, False),
        "equal": (1.0, 1.0, False, True),
        "at_least_reached": (2.0, 1.0, True, True),
        "at_least_missed": (0.5, 1.0, True, False),
        "nan": (float("nan"), 1.0, False, False),
        "nan_at_least": (float("nan"), 1.0, True, False),
    }

    @pytest.mark.parametrize(
        ("residual", "tolerance", "at_least", "passed"), MEASURE_CASES.values(), ids=MEASURE_CASES.keys()
    )
    def test_outcome(self, residual, tolerance, at_least, passed):
        result = measure("sample", tolerance, lambda: residual, at_least=at_least)
        assert result.passed is passed
        assert result.name == "sample"
        assert result.wall_time >= 0.0

    @pytest.mark.parametrize("kind", RESIDUAL_KINDS.keys())
    def test_kind_is_recorded(self, kind):
        result = measure("sample", 1.0, lambda: 0.5, kind=kind)
        assert result.kind == kind
        assert result.to_dict()["residual_kind"] == kind

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            measure("sample", 1.0, lambda: 0.5, kind="percent")


class TestContainers:
    def _summary(self):
        return CheckSummary(
            "demo",
            (CheckResult("a", True, 0.0, 1.0, 0.1), CheckResult("b", False, 2.0, 1.0, 0.2)),
        )

    def test_wall_time_excluded_by_default(self):
        result = CheckResult("a", True, 0.5, 1.0, 0.25)
        assert result.to_dict() == {
            "name": "a",
            "passed": True,
            "residual": 0.5,
            "residual_kind": "absolute",
            "tolerance": 1.0,
        }
        assert result.to_dict(timing=True)["wall_time"] == 0.25

    def test_lookup(self):
        summary = self._summary()
        assert summary["b"].residual == 2.0
        with pytest.raises(KeyError):
            _ = summary["c"]

    def test_exit_code(self):
        summary = self._summary()
        assert not summary.passed
        assert summary.exit_code == EXIT_CHECK_FAILED
        assert CheckSummary("empty", ()).exit_code == EXIT_OK

    def test_merged(self):
        summary = self._summary()
        merged = summary.merged(CheckSummary("other", (CheckResult("c", True, 0.0, 1.0, 0.0),)))
        assert merged.title == "demo"
        assert merged.names == ("a", "b", "c")

    def test_to_dict(self):
        document = self._summary().to_dict()
        assert document["title"] == "demo"
        assert document["passed"] is False
        assert [check["name"] for check in document["checks"]] == ["a", "b"]


class TestSamplePoints:
    def test_seeded(self):
        assert sample_adapted_points(5, 1) == sample_adapted_points(5, 1)
        assert sample_adapted_points(5, 1) != sample_adapted_points(5, 2)

    def test_ranges(self):
        for x in sample_adapted_points(200, 3, (0.8, 3.0), (-1.0, 1.0)):
            assert 0.8 <= x.q_star <= 3.0
            assert -1.0 <= x.ft1 <= 1.0
            assert -1.0 <= x.ft2 <= 1.0


class TestGeometryCheck:
    def test_passes(self, quick_config):
        summary = run_geometry_check(quick_config)
        assert summary.names == GEOMETRY_CHECKS
        assert summary.passed, [r.name for r in summary.results if not r.passed]
        assert summary.exit_code == EXIT_OK

    GEOMETRY_KINDS = {
        "metric_inverse": "scaled",
        "det_g": "relative",
        "jacobian_identity": "relative",
        "h_det": "absolute",
    }

    @pytest.mark.parametrize(("name", "kind"), GEOMETRY_KINDS.items(), ids=GEOMETRY_KINDS.keys())
    def test_residual_kind(self, quick_config, name, kind):
        assert run_geometry_check(quick_config)[name].kind == kind

    def test_flipped_connection_is_caught(self, quick_document):
        summary = run_geometry_check(_with_checks(quick_document, fault="flip-connection"))
        failed = {result.name for result in summary.results if not result.passed}
        assert {"connection_pairing", "general_connection", "rz_killing"} <= failed
        assert summary["det_g"].passed
        assert summary.exit_code == EXIT_CHECK_FAILED

    def test_deterministic(self, quick_config):
        first = run_geometry_check(quick_config).to_dict()
        second = run_geometry_check(quick_config).to_dict()
        assert first == second


@pytest.mark.slow
class TestGeometryCheckAtDefaultSize:
    def test_passes(self):
        summary = run_geometry_check(get_config({}))
        assert summary["jacobian_identity"].residual < JACOBIAN_RTOL
        assert summary.passed, [r.name for r in summary.results if not r.passed]


class TestGeneratorCheck:
    def test_passes(self, quick_config):
        summary = run_generator_check(quick_config)
        assert summary.names == GENERATOR_CHECKS
        assert summary.passed, [r.name for r in summary.results if not r.passed]


class TestSdeCheck:
    def test_names_and_exact_checks(self, quick_config):
        summary = run_sde_check(quick_config)
        assert summary.names == SDE_CHECKS
        for name in ("phase_modulus", "weight_sign", "discard_fraction"):
            assert summary[name].passed, name
        assert 0.0 <= summary["transport_adapted"].residual <= 1.0
        assert summary["bessel_moment"].residual < 5.0
        assert summary["phase_mean"].residual < 5.0

    SDE_KINDS = {
        "transport_adapted": "pvalue",
        "bessel_moment": "z",
        "phase_modulus": "relative",
        "weight_sign": "count",
    }

    def test_residual_kinds(self, quick_config):
        summary = run_sde_check(quick_config)
        assert {name: summary[name].kind for name in self.SDE_KINDS} == self.SDE_KINDS


@pytest.mark.slow
class TestSdeCheckAtDefaultSize:
    def test_passes(self):
        summary = run_sde_check(get_config({"checks": {"seed": 12345}}))
        assert summary.passed, [r.name for r in summary.results if not r.passed]
