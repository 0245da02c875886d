"""
Kernel queries, target boxes and reports.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from orbitkernel.const import BOX_NODES, QUAD_POINTS, RELATION_Z_MAX
from orbitkernel.errors import ConfigError
from orbitkernel.modules.geometry.bundle import orbit_metric_arrays
from orbitkernel.modules.geometry.points import BasePoint, as_base
from orbitkernel.modules.sde.params import SimParams


@dataclass(frozen=True)
class Box:
    """
    Axis-aligned box in (Q*, f~1, f~2).

    Attributes:
        center: Box center
        half_widths: Positive half-widths per axis
    """

    center: tuple
    half_widths: tuple

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        object.__setattr__(self, "half_widths", tuple(float(v) for v in self.half_widths))
        if len(self.center) != 3 or len(self.half_widths) != 3:
            raise ConfigError("a box needs three center coordinates and three half-widths")
        if min(self.half_widths) <= 0.0:
            raise ConfigError(f"box half-widths must be positive, got {self.half_widths}")

    @property
    def lower(self):
        return np.array(self.center) - np.array(self.half_widths)

    @property
    def upper(self):
        return np.array(self.center) + np.array(self.half_widths)

    @property
    def center_point(self):
        return BasePoint(*self.center)

    def contains(self, points):
        """Mask of the columns of a (3, m) array that lie in the box."""
        points = np.asarray(points)
        return np.all((points >= self.lower[:, None]) & (points <= self.upper[:, None]), axis=0)

    def gauss_nodes(self, n=BOX_NODES):
        """
        Tensor Gauss-Legendre rule on the box.

        Returns:
            Tuple (points (3, n^3), weights (n^3,)) for integrals dQ* df~1 df~2
        """
        nodes, weights = np.polynomial.legendre.leggauss(n)
        axes = [c + hw * nodes for c, hw in zip(self.center, self.half_widths)]
        axis_weights = [hw * weights for hw in self.half_widths]
        grid = np.meshgrid(*axes, indexing="ij")
        w = np.einsum("i,j,k->ijk", *axis_weights)
        return np.array([g.ravel() for g in grid]), w.ravel()

    def riemannian_volume(self, n=BOX_NODES):
        """Integral of sqrt(H) = Q*/sqrt(d) over the box."""
        points, weights = self.gauss_nodes(n)
        sqrt_h = orbit_metric_arrays(*points)[3]
        return float(weights @ sqrt_h)

    def rotated(self):
        """The box under (f~1, f~2) -> (-f~2, f~1); exact for equal f~ half-widths."""
        q, f1, f2 = self.center
        hq, h1, h2 = self.half_widths
        return Box((q, -f2, f1), (hq, h2, h1))

    def to_dict(self):
        return {"center": list(self.center), "half_widths": list(self.half_widths)}


@dataclass(frozen=True)
class KernelQuery:
    """
    One evaluation of the reduction relation.

    Attributes:
        start: BasePoint x_a
        box: Box around the end point x_b
        t: Elapsed time
        params: SimParams
        quad_points: Nodes of the orbit quadrature
    """

    start: BasePoint
    box: Box
    t: float
    params: SimParams = field(default_factory=SimParams)
    quad_points: int = QUAD_POINTS

    def __post_init__(self):
        object.__setattr__(self, "start", as_base(self.start))
        if not self.t > 0.0:
            raise ConfigError(f"t must be positive, got {self.t}")
        if self.box.lower[0] <= self.params.eps_min:
            raise ConfigError(f"box reaches below the axis guard: lower Q* = {self.box.lower[0]}")
        if self.quad_points < 4:
            raise ConfigError(f"quad_points must be at least 4, got {self.quad_points}")

    def to_dict(self):
        return {
            "start": self.start.as_array().tolist(),
            "box": self.box.to_dict(),
            "t": self.t,
            "quad_points": int(self.quad_points),
        }


@dataclass(frozen=True)
class KernelReport:
    """
    Both sides of the reduction relation on one query.

    Attributes:
        lhs: d_a^{-1/4} d_b^{-1/4} times the Monte Carlo reduced kernel
        lhs_stderr: Batch-means standard error of lhs
        rhs: Matched box average of the orbit-averaged flat kernel
        residual: (lhs - rhs) / rhs
        z: (lhs - rhs) / lhs_stderr
        n_paths: Trajectories simulated
        discards: Trajectories absorbed at the axis guard
        hits: Kept endpoints inside the box
        quad_converged: Orbit quadrature passed its doubling check
        include_jacobian: J was part of the path weight
        grid_lhs: Grid-solver counterpart of lhs, if computed
        params: Resolved parameters embedded in serialized output
    """

    lhs: float
    lhs_stderr: float
    rhs: float
    residual: float
    z: float
    n_paths: int
    discards: int
    hits: int
    quad_converged: bool = True
    include_jacobian: bool = True
    grid_lhs: object = None
    params: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.quad_converged and abs(self.z) <= RELATION_Z_MAX

    def to_dict(self):
        out = {
            "lhs": self.lhs,
            "lhs_stderr": self.lhs_stderr,
            "rhs": self.rhs,
            "residual": self.residual,
            "z": self.z,
            "n_paths": int(self.n_paths),
            "discards": int(self.discards),
            "hits": int(self.hits),
            "quad_converged": bool(self.quad_converged),
            "include_jacobian": bool(self.include_jacobian),
            "passed": bool(self.passed),
        }
        if self.grid_lhs is not None:
            out["grid_lhs"] = self.grid_lhs
        out["params"] = self.params
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)
