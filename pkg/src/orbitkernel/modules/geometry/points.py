"""
Points of R'^2 x R^2, the SO(2) action and adapted (bundle) coordinates.

A point (Q1, Q2, f1, f2) is written in adapted coordinates as
(Q*, f~1, f~2, a): Q* is the radius on the zero-section gauge surface
{Q2 = 0, Q1 > 0}, f~ is f rotated back by the group angle a, and
Q1 = Q* cos a, Q2 = -Q* sin a.

The array helpers accept numpy arrays of any matching shape and are what
the path simulators use; the point functions are thin scalar wrappers.
"""

import math
from dataclasses import dataclass

import numpy as np

from orbitkernel.const import EPS_MIN, TWO_PI
from orbitkernel.errors import DegeneratePoint


def normalize_angle(angle):
    """Map an angle (scalar or array) into [0, 2*pi)."""
    wrapped = np.mod(angle, TWO_PI)
    # np.mod can round a tiny negative input up to exactly 2*pi
    wrapped = np.where(wrapped >= TWO_PI, 0.0, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


@dataclass(frozen=True)
class EuclideanPoint:
    """
    A point of P~ = R'^2 x R^2 in flat coordinates.

    Attributes:
        q1, q2: Coordinates on the punctured plane R'^2
        f1, f2: Coordinates on the vector space R^2
    """

    q1: float
    q2: float
    f1: float
    f2: float

    def __post_init__(self):
        if self.q1 * self.q1 + self.q2 * self.q2 <= 0.0:
            raise DegeneratePoint("the origin of R^2 is excluded from the manifold")

    @property
    def radius(self):
        return math.hypot(self.q1, self.q2)

    def as_array(self):
        return np.array([self.q1, self.q2, self.f1, self.f2])

    @classmethod
    def from_array(cls, values):
        q1, q2, f1, f2 = (float(v) for v in values)
        return cls(q1, q2, f1, f2)


@dataclass(frozen=True)
class BasePoint:
    """
    A point of the orbit space M~ with coordinates (Q*, f~1, f~2).
    """

    q_star: float
    ft1: float
    ft2: float

    def __post_init__(self):
        if not self.q_star > 0.0:
            raise DegeneratePoint(f"q_star must be positive, got {self.q_star}")

    @property
    def rho2(self):
        """Squared radius of f~ in its plane."""
        return self.ft1 * self.ft1 + self.ft2 * self.ft2

    @property
    def d(self):
        """Squared norm of the Killing field, Q*^2 + |f~|^2."""
        return self.q_star * self.q_star + self.rho2

    def as_array(self):
        return np.array([self.q_star, self.ft1, self.ft2])

    def lift(self, angle=0.0):
        """The adapted point over this base point at the given group angle."""
        return AdaptedPoint(self.q_star, self.ft1, self.ft2, angle)

    @classmethod
    def from_array(cls, values):
        q_star, ft1, ft2 = (float(v) for v in values)
        return cls(q_star, ft1, ft2)


@dataclass(frozen=True)
class AdaptedPoint:
    """
    Bundle coordinates (Q*, f~1, f~2, a) of a point of P~.

    The angle is normalized to [0, 2*pi) on construction.
    """

    q_star: float
    ft1: float
    ft2: float
    angle: float = 0.0

    def __post_init__(self):
        if not self.q_star > 0.0:
            raise DegeneratePoint(f"q_star must be positive, got {self.q_star}")
        object.__setattr__(self, "angle", normalize_angle(self.angle))

    @property
    def base(self):
        return BasePoint(self.q_star, self.ft1, self.ft2)

    @property
    def d(self):
        return self.base.d

    def as_array(self):
        return np.array([self.q_star, self.ft1, self.ft2, self.angle])


def as_base(x):
    """Accept an AdaptedPoint, BasePoint or 3-sequence and return a BasePoint."""
    if isinstance(x, BasePoint):
        return x
    if isinstance(x, AdaptedPoint):
        return x.base
    return BasePoint.from_array(x)


def rotate_arrays(q1, q2, f1, f2, theta):
    """
    Apply the group element theta to flat coordinates (arrays or scalars).

    Q rotates clockwise and f counter-clockwise, which makes the action
    isometric and free on R'^2 x R^2.
    """
    c = np.cos(theta)
    s = np.sin(theta)
    return (
        q1 * c + q2 * s,
        -q1 * s + q2 * c,
        f1 * c - f2 * s,
        f1 * s + f2 * c,
    )


def adapted_arrays(q1, q2, f1, f2):
    """
    Flat coordinates to adapted coordinates, elementwise.

    Returns:
        Tuple (q_star, ft1, ft2, angle) with angle in [0, 2*pi)
    """
    q_star = np.hypot(q1, q2)
    angle = normalize_angle(np.arctan2(-q2, q1))
    c = np.cos(angle)
    s = np.sin(angle)
    ft1 = f1 * c + f2 * s
    ft2 = -f1 * s + f2 * c
    return q_star, ft1, ft2, angle


def flat_arrays(q_star, ft1, ft2, angle):
    """Adapted coordinates to flat coordinates, elementwise."""
    c = np.cos(angle)
    s = np.sin(angle)
    return (
        q_star * c,
        -q_star * s,
        ft1 * c - ft2 * s,
        ft1 * s + ft2 * c,
    )


def group_act(p, theta):
    """
    Act with the rotation angle theta on a point.

    Args:
        p: EuclideanPoint
        theta: Group element as an angle

    Returns:
        The rotated EuclideanPoint; |Q| and |f| are preserved
    """
    return EuclideanPoint(*(float(v) for v in rotate_arrays(p.q1, p.q2, p.f1, p.f2, theta)))


def to_adapted(p, eps_min=EPS_MIN):
    """
    Express a flat point in adapted coordinates.

    The angle is the two-argument arctangent of (-Q2, Q1), so that
    Q1 = Q* cos a and Q2 = -Q* sin a with Q* > 0.

    Args:
        p: EuclideanPoint
        eps_min: Radius guard; closer points are rejected

    Returns:
        AdaptedPoint

    Raises:
        DegeneratePoint: If Q1^2 + Q2^2 < eps_min^2
    """
    if p.q1 * p.q1 + p.q2 * p.q2 < eps_min * eps_min:
        raise DegeneratePoint(f"point {p} lies within {eps_min} of the axis")
    q_star, ft1, ft2, angle = adapted_arrays(p.q1, p.q2, p.f1, p.f2)
    return AdaptedPoint(float(q_star), float(ft1), float(ft2), float(angle))


def from_adapted(x):
    """Express an adapted point in flat coordinates."""
    return EuclideanPoint(*(float(v) for v in flat_arrays(x.q_star, x.ft1, x.ft2, x.angle)))


def gauge_condition(p):
    """The zero-section gauge function chi(Q) = Q2."""
    return p.q2
