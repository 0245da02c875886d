"""
Tests for boxes, kernel queries and reports.
"""

import json
import math

import numpy as np
import pytest

from orbitkernel.errors import ConfigError
from orbitkernel.modules.geometry import BasePoint
from orbitkernel.modules.kernels import Box, KernelQuery, KernelReport
from orbitkernel.modules.sde import SimParams


class TestBox:
    BOX = Box((1.2, 0.3, 0.2), (0.15, 0.15, 0.15))

    @pytest.mark.parametrize(
        ("center", "half_widths"),
        [((1.0, 0.0), (0.1, 0.1, 0.1)), ((1.0, 0.0, 0.0), (0.1, 0.0, 0.1))],
    )
    def test_invalid(self, center, half_widths):
        with pytest.raises(ConfigError):
            Box(center, half_widths)

    def test_bounds(self):
        np.testing.assert_allclose(self.BOX.lower, [1.05, 0.15, 0.05])
        np.testing.assert_allclose(self.BOX.upper, [1.35, 0.45, 0.35])
        assert self.BOX.center_point == BasePoint(1.2, 0.3, 0.2)

    def test_contains(self):
        points = np.array([[1.2, 1.4, 1.1], [0.3, 0.3, 0.2], [0.2, 0.2, 0.0]])
        np.testing.assert_array_equal(self.BOX.contains(points), [True, False, False])

    def test_gauss_nodes_integrate_volume(self):
        points, weights = self.BOX.gauss_nodes(4)
        assert points.shape == (3, 64)
        assert weights.sum() == pytest.approx(0.3**3)
        assert np.all(self.BOX.contains(points))

    def test_gauss_nodes_are_exact_for_polynomials(self):
        points, weights = self.BOX.gauss_nodes(3)
        # int of Q*^2 over [1.05, 1.35], times the f~ face area
        expected = (1.35**3 - 1.05**3) / 3.0 * 0.09
        assert weights @ points[0] ** 2 == pytest.approx(expected)

    def test_riemannian_volume(self):
        center = self.BOX.center_point
        approx = 0.3**3 * center.q_star / math.sqrt(center.d)
        assert self.BOX.riemannian_volume() == pytest.approx(approx, rel=1e-2)

    def test_rotated(self):
        rotated = Box((1.0, 0.3, -0.5), (0.1, 0.2, 0.3)).rotated()
        assert rotated.center == (1.0, 0.5, 0.3)
        assert rotated.half_widths == (0.1, 0.3, 0.2)


class TestKernelQuery:
    BOX = Box((1.2, 0.3, 0.2), (0.15, 0.15, 0.15))

    def test_start_is_normalized(self):
        query = KernelQuery(start=(1.0, 0.5, 0.0), box=self.BOX, t=0.5)
        assert query.start == BasePoint(1.0, 0.5, 0.0)

    @pytest.mark.parametrize("t", [0.0, -1.0])
    def test_positive_time(self, t):
        with pytest.raises(ConfigError):
            KernelQuery(start=(1.0, 0.5, 0.0), box=self.BOX, t=t)

    def test_box_above_axis_guard(self):
        with pytest.raises(ConfigError):
            KernelQuery(start=(1.0, 0.5, 0.0), box=Box((0.1, 0.0, 0.0), (0.2, 0.1, 0.1)), t=0.5)

    def test_quad_points(self):
        with pytest.raises(ConfigError):
            KernelQuery(start=(1.0, 0.5, 0.0), box=self.BOX, t=0.5, quad_points=2)

    def test_to_dict(self):
        query = KernelQuery(start=(1.0, 0.5, 0.0), box=self.BOX, t=0.5, params=SimParams(seed=1))
        assert query.to_dict() == {
            "start": [1.0, 0.5, 0.0],
            "box": {"center": [1.2, 0.3, 0.2], "half_widths": [0.15, 0.15, 0.15]},
            "t": 0.5,
            "quad_points": 256,
        }


class TestKernelReport:
    def _report(self, **overrides):
        values = {
            "lhs": 0.1,
            "lhs_stderr": 0.001,
            "rhs": 0.1005,
            "residual": -0.005,
            "z": -0.5,
            "n_paths": 1000,
            "discards": 0,
            "hits": 200,
        }
        values.update(overrides)
        return KernelReport(**values)

    @pytest.mark.parametrize(
        ("overrides", "expected"),
        [({}, True), ({"z": 3.5}, False), ({"quad_converged": False}, False), ({"z": -3.0}, True)],
    )
    def test_passed(self, overrides, expected):
        assert self._report(**overrides).passed is expected

    def test_json(self):
        document = json.loads(self._report(grid_lhs=0.099, params={"t": 0.5}).to_json())
        assert document["passed"] is True
        assert document["grid_lhs"] == 0.099
        assert document["params"] == {"t": 0.5}

    def test_json_omits_missing_grid(self):
        assert "grid_lhs" not in self._report().to_dict()
