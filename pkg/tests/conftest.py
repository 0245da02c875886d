"""
pytest configuration and shared fixtures for orbitkernel tests.
"""

import copy

import numpy as np
import pytest

from orbitkernel.config import get_config
from orbitkernel.modules.geometry import AdaptedPoint, BasePoint
from orbitkernel.modules.kernels import Box, KernelQuery
from orbitkernel.modules.sde import SimParams

# Base points away from the axis, one with f~ = 0
BASE_POINTS = {
    "default_start": (1.0, 0.5, 0.0),
    "box_center": (1.2, 0.3, 0.2),
    "on_q_axis": (0.7, 0.0, 0.0),
    "large_f": (0.4, -2.1, 1.3),
    "large_q": (4.5, 0.2, -0.9),
}


@pytest.fixture(params=list(BASE_POINTS.values()), ids=list(BASE_POINTS))
def base_point(request):
    """Fixture that parametrizes tests across representative base points."""
    return BasePoint(*request.param)


@pytest.fixture
def adapted_points():
    """Seeded adapted points covering the sampling range of the check harness."""
    rng = np.random.default_rng(2024)
    return [
        AdaptedPoint(rng.uniform(0.2, 5.0), rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(0.0, 6.28))
        for _ in range(25)
    ]


@pytest.fixture
def small_params():
    """A cheap simulation: 4000 paths to t = 0.1."""
    return SimParams(seed=7, n_paths=4000, t_total=0.1, dt=1e-2, batch_size=1000)


@pytest.fixture
def small_query():
    """A query whose box is hit often enough with 20000 paths."""
    params = SimParams(seed=11, n_paths=20_000, t_total=0.5, dt=5e-3, batch_size=5000)
    return KernelQuery(
        start=BasePoint(1.0, 0.5, 0.0),
        box=Box((1.2, 0.3, 0.2), (0.3, 0.3, 0.3)),
        t=0.5,
        params=params,
    )


QUICK_DOCUMENT = {
    "sim": {"n_paths": 20_000, "dt": 5e-3, "batch_size": 5000, "seed": 3},
    "query": {"half_widths": [0.3, 0.3, 0.3]},
    "checks": {
        "n_points": 40,
        "field_points": 8,
        "harmonics": [-1, 0, 2],
        "sde_paths": 4000,
        "sde_t": 0.1,
    },
    # 20000 paths cannot resolve the J-off shift
    "negative_control": False,
}


@pytest.fixture
def quick_document():
    """A configuration document sized for the fast test tier."""
    return copy.deepcopy(QUICK_DOCUMENT)


@pytest.fixture
def quick_config(quick_document):
    return get_config(quick_document)
