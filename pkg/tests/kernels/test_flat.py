"""
Tests for the flat heat kernel and its orbit average.
"""

import itertools
import math

import numpy as np
import pytest

from orbitkernel.errors import QuadratureNotConverged
from orbitkernel.modules.geometry import BasePoint, EuclideanPoint, from_adapted, group_act
from orbitkernel.modules.kernels import (
    Box,
    KernelQuery,
    closed_form_orbit_average,
    flat_heat_kernel,
    orbit_average_at,
    orbit_average_rhs,
)
from orbitkernel.modules.sde import SimParams

XA = BasePoint(1.0, 0.5, 0.0)
XB = BasePoint(1.2, 0.3, 0.2)


class TestFlatHeatKernel:
    def test_peak(self):
        p = EuclideanPoint(1.0, 0.0, 0.0, 0.0)
        assert flat_heat_kernel(p, p, 0.5, 2.0) == pytest.approx((2.0 * math.pi) ** -2)

    def test_gaussian_decay(self):
        pa = EuclideanPoint(1.0, 0.0, 0.0, 0.0)
        pb = EuclideanPoint(1.0, 1.0, 0.0, 1.0)
        ratio = flat_heat_kernel(pa, pb, 0.5, 1.0) / flat_heat_kernel(pa, pa, 0.5, 1.0)
        assert ratio == pytest.approx(math.exp(-2.0))

    def test_invariant_under_group(self):
        pa, pb = from_adapted(XA.lift(0.3)), from_adapted(XB.lift(1.9))
        rotated = flat_heat_kernel(group_act(pa, 0.8), group_act(pb, 0.8), 0.4, 1.0)
        assert rotated == pytest.approx(flat_heat_kernel(pa, pb, 0.4, 1.0))

    NORMALIZATION_CASES = {
        "unit": (0.5, 1.0),
        "short_time": (0.05, 1.0),
        "large_lambda": (0.3, 4.0),
    }

    @pytest.mark.parametrize(("t", "lam"), NORMALIZATION_CASES.values(), ids=NORMALIZATION_CASES.keys())
    def test_integrates_to_one(self, t, lam):
        # tensor Gauss-Hermite rule for the weight exp(-|z|^2 / 2) around pa
        pa = EuclideanPoint(1.0, -0.3, 0.5, 0.2)
        nodes, weights = np.polynomial.hermite_e.hermegauss(6)
        sigma = math.sqrt(lam * t)
        total = 0.0
        for z in itertools.product(range(6), repeat=4):
            offset = sigma * nodes[list(z)]
            pb = EuclideanPoint.from_array(pa.as_array() + offset)
            weight = np.prod(weights[list(z)]) * sigma**4 * math.exp(0.5 * np.sum(nodes[list(z)] ** 2))
            total += weight * flat_heat_kernel(pa, pb, t, lam)
        assert total == pytest.approx(1.0, rel=1e-10)

    def test_needs_positive_time(self):
        p = EuclideanPoint(1.0, 0.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            flat_heat_kernel(p, p, 0.0, 1.0)


class TestOrbitAverage:
    CASES = {
        "default": (XA, XB, 0.5, 1.0),
        "short_time": (XA, XB, 0.05, 1.0),
        "large_lambda": (XA, BasePoint(2.0, -1.0, 0.4), 0.25, 3.0),
        "zero_f": (BasePoint(0.7, 0.0, 0.0), BasePoint(1.1, 0.0, 0.0), 0.3, 1.0),
    }

    @pytest.mark.parametrize("case", CASES.values(), ids=CASES.keys())
    def test_trapezoid_matches_closed_form(self, case):
        xa, xb, t, lam = case
        assert orbit_average_at(xa, xb, t, lam) == pytest.approx(closed_form_orbit_average(xa, xb, t, lam), rel=1e-10)

    def test_symmetric(self):
        assert closed_form_orbit_average(XA, XB, 0.5, 1.0) == pytest.approx(closed_form_orbit_average(XB, XA, 0.5, 1.0))

    def test_invariant_under_lift_angles(self):
        # lifting both end points at other angles only shifts the orbit integral
        a, b = from_adapted(XA.lift(0.7)), from_adapted(XB.lift(2.1))
        n = 2048
        total = sum(flat_heat_kernel(a, group_act(b, 2.0 * math.pi * k / n), 0.5, 1.0) for k in range(n))
        assert 2.0 * math.pi * total / n == pytest.approx(closed_form_orbit_average(XA, XB, 0.5, 1.0), rel=1e-10)

    def test_no_overflow_at_short_times(self):
        value = closed_form_orbit_average(BasePoint(4.0, 2.0, 1.0), BasePoint(4.0, 2.0, 1.0), 1e-4, 1.0)
        assert math.isfinite(value)
        assert value > 0.0

    def test_coarse_quadrature_is_rejected(self):
        with pytest.raises(QuadratureNotConverged):
            orbit_average_at(XA, XB, 0.01, 1.0, quad_points=4)


class TestOrbitAverageRhs:
    def _query(self, box, start=XA):
        return KernelQuery(start=start, box=box, t=0.5, params=SimParams())

    def test_small_box_tends_to_point_value(self):
        query = self._query(Box(XB.as_array(), (1e-3, 1e-3, 1e-3)))
        assert orbit_average_rhs(query) == pytest.approx(closed_form_orbit_average(XA, XB, 0.5, 1.0), rel=1e-5)

    def test_rotation_of_f_plane(self):
        box = Box(XB.as_array(), (0.15, 0.15, 0.15))
        rotated_start = BasePoint(XA.q_star, -XA.ft2, XA.ft1)
        assert orbit_average_rhs(self._query(box.rotated(), rotated_start)) == pytest.approx(
            orbit_average_rhs(self._query(box)), rel=1e-10
        )
