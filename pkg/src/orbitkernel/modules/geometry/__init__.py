"""
Geometry of the SO(2) bundle R'^2 x R^2 -> M~.

Provides:
- Points in flat and adapted coordinates and the group action
- Closed-form metric, connection, projector and diffusion factors
- The reduction Jacobian potential
"""

from orbitkernel.modules.geometry.bundle import (
    GeometryBundle,
    faddeev_popov,
    forward_operator_symbolic,
    general_formula_connection,
    general_formula_horizontal_metric,
    geometry_at,
    jacobian_potential,
    semigroup_volume_density,
)
from orbitkernel.modules.geometry.points import (
    AdaptedPoint,
    BasePoint,
    EuclideanPoint,
    from_adapted,
    gauge_condition,
    group_act,
    to_adapted,
)

__all__ = [
    # Points
    "AdaptedPoint",
    "BasePoint",
    "EuclideanPoint",
    "from_adapted",
    "gauge_condition",
    "group_act",
    "to_adapted",
    # Bundle
    "GeometryBundle",
    "faddeev_popov",
    "forward_operator_symbolic",
    "general_formula_connection",
    "general_formula_horizontal_metric",
    "geometry_at",
    "jacobian_potential",
    "semigroup_volume_density",
]
