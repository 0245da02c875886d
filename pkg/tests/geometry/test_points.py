"""
Tests for flat and adapted points and the SO(2) action.
"""

import math

import numpy as np
import pytest

from orbitkernel.errors import DegeneratePoint
from orbitkernel.modules.geometry import (
    AdaptedPoint,
    BasePoint,
    EuclideanPoint,
    from_adapted,
    gauge_condition,
    group_act,
    to_adapted,
)
from orbitkernel.modules.geometry.points import as_base, normalize_angle


class TestNormalizeAngle:
    """Angles are mapped into [0, 2 pi)."""

    ANGLE_CASES = {
        0.0: 0.0,
        -0.5: 2.0 * math.pi - 0.5,
        2.0 * math.pi: 0.0,
        7.0: 7.0 - 2.0 * math.pi,
    }

    @pytest.mark.parametrize(("angle", "expected"), ANGLE_CASES.items())
    def test_scalar(self, angle, expected):
        assert normalize_angle(angle) == pytest.approx(expected, abs=1e-15)

    def test_tiny_negative_never_returns_two_pi(self):
        assert normalize_angle(-1e-18) < 2.0 * math.pi

    def test_array(self):
        result = normalize_angle(np.array([-1.0, 1.0, 10.0]))
        assert result.shape == (3,)
        assert np.all((result >= 0.0) & (result < 2.0 * math.pi))


class TestPoints:
    """Construction guards and derived quantities."""

    def test_origin_of_plane_is_excluded(self):
        with pytest.raises(DegeneratePoint):
            EuclideanPoint(0.0, 0.0, 1.0, 2.0)

    @pytest.mark.parametrize("q_star", [0.0, -1.0])
    def test_base_point_needs_positive_radius(self, q_star):
        with pytest.raises(DegeneratePoint):
            BasePoint(q_star, 0.1, 0.2)

    def test_degenerate_point_is_a_value_error(self):
        with pytest.raises(ValueError):
            AdaptedPoint(0.0, 0.0, 0.0)

    def test_killing_norm(self):
        x = BasePoint(1.5, 0.3, -0.4)
        assert x.rho2 == pytest.approx(0.25)
        assert x.d == pytest.approx(2.5)

    def test_adapted_angle_is_normalized(self):
        assert AdaptedPoint(1.0, 0.0, 0.0, -math.pi / 2).angle == pytest.approx(1.5 * math.pi)

    def test_lift_and_base(self):
        x = BasePoint(1.0, 0.2, 0.3).lift(0.4)
        assert x.angle == pytest.approx(0.4)
        assert x.base == BasePoint(1.0, 0.2, 0.3)

    AS_BASE_CASES = {
        "tuple": (1.0, 2.0, 3.0),
        "base": BasePoint(1.0, 2.0, 3.0),
        "adapted": AdaptedPoint(1.0, 2.0, 3.0, 1.0),
    }

    @pytest.mark.parametrize("value", AS_BASE_CASES.values(), ids=AS_BASE_CASES.keys())
    def test_as_base(self, value):
        assert as_base(value) == BasePoint(1.0, 2.0, 3.0)


class TestAdaptedCoordinates:
    """Flat <-> adapted conversion."""

    def test_point_on_gauge_surface(self):
        x = to_adapted(EuclideanPoint(2.0, 0.0, 0.3, -0.7))
        assert x.angle == pytest.approx(0.0)
        assert x.q_star == pytest.approx(2.0)
        assert (x.ft1, x.ft2) == pytest.approx((0.3, -0.7))

    def test_angle_orientation(self):
        # Q2 = -Q* sin a
        x = to_adapted(EuclideanPoint(0.0, -1.0, 0.0, 0.0))
        assert x.angle == pytest.approx(math.pi / 2)

    def test_roundtrip(self, adapted_points):
        for x in adapted_points:
            back = to_adapted(from_adapted(x))
            np.testing.assert_allclose(back.as_array()[:3], x.as_array()[:3], rtol=1e-12, atol=1e-12)
            assert math.cos(back.angle - x.angle) == pytest.approx(1.0)

    def test_axis_guard(self):
        with pytest.raises(DegeneratePoint):
            to_adapted(EuclideanPoint(1e-3, 0.0, 1.0, 1.0), eps_min=1e-2)

    def test_gauge_condition_vanishes_on_the_section(self, base_point):
        assert gauge_condition(from_adapted(base_point.lift(0.0))) == pytest.approx(0.0, abs=1e-15)


class TestGroupAction:
    """The rotation is an isometry that only moves the angle coordinate."""

    POINT = EuclideanPoint(0.8, -0.3, 1.2, 0.4)

    @pytest.mark.parametrize("theta", [0.0, 0.3, math.pi, 5.0])
    def test_preserves_norms(self, theta):
        image = group_act(self.POINT, theta)
        assert math.hypot(image.q1, image.q2) == pytest.approx(self.POINT.radius)
        assert math.hypot(image.f1, image.f2) == pytest.approx(math.hypot(self.POINT.f1, self.POINT.f2))

    def test_composition(self):
        once = group_act(group_act(self.POINT, 0.7), 1.1)
        np.testing.assert_allclose(once.as_array(), group_act(self.POINT, 1.8).as_array(), atol=1e-14)

    @pytest.mark.parametrize("theta", [0.2, 2.5, 4.0])
    def test_shifts_angle_and_keeps_base(self, theta):
        x = to_adapted(self.POINT)
        y = to_adapted(group_act(self.POINT, theta))
        np.testing.assert_allclose(y.as_array()[:3], x.as_array()[:3], atol=1e-13)
        assert math.cos(y.angle - x.angle - theta) == pytest.approx(1.0)
        assert math.sin(y.angle - x.angle - theta) == pytest.approx(0.0, abs=1e-12)

    def test_distance_is_preserved(self):
        other = EuclideanPoint(-1.0, 0.5, 0.0, 2.0)
        before = np.linalg.norm(self.POINT.as_array() - other.as_array())
        after = np.linalg.norm(group_act(self.POINT, 1.3).as_array() - group_act(other, 1.3).as_array())
        assert after == pytest.approx(before)
