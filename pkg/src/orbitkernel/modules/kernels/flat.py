"""
The flat heat kernel on R^4 and its average over the SO(2) orbit.

Both endpoints enter as base points lifted at angle 0; the orbit of the
end point is swept with group_act. The average is normalized so that it
equals d_a^{-1/4} d_b^{-1/4} G_M for the reduced kernel G_M, i.e. it is
the integral of the flat kernel over theta in [0, 2 pi).
"""

import logging
import math

import numpy as np
from scipy.special import i0e

from orbitkernel.const import BOX_NODES, QUAD_POINTS, QUAD_RTOL, TWO_PI
from orbitkernel.errors import QuadratureNotConverged
from orbitkernel.modules.geometry.bundle import killing_norm_arrays, orbit_metric_arrays
from orbitkernel.modules.geometry.points import as_base, rotate_arrays

logger = logging.getLogger(__name__)


def flat_heat_kernel(pa, pb, t, lam):
    """
    Transition density of Brownian motion with covariance lambda t I on R^4.

    Args:
        pa, pb: EuclideanPoint
        t: Elapsed time, positive
        lam: Diffusion scale lambda

    Returns:
        (2 pi lambda t)^{-2} exp(-|pb - pa|^2 / (2 lambda t))
    """
    if not t > 0.0:
        raise ValueError(f"t must be positive, got {t}")
    dist2 = float(np.sum((pb.as_array() - pa.as_array()) ** 2))
    return (TWO_PI * lam * t) ** -2 * math.exp(-dist2 / (2.0 * lam * t))


def _orbit_exponents(xa, xb, theta, scale):
    qa, fa1, fa2 = xa.as_array()
    qb, fb1, fb2 = xb.as_array()
    q1, q2, f1, f2 = rotate_arrays(qb, 0.0, fb1, fb2, theta)
    dist2 = (q1 - qa) ** 2 + q2**2 + (f1 - fa1) ** 2 + (f2 - fa2) ** 2
    return -dist2 / scale


def _trapezoid(xa, xb, t, lam, quad_points):
    scale = 2.0 * lam * t
    theta = TWO_PI * np.arange(quad_points) / quad_points
    exponents = _orbit_exponents(xa, xb, theta, scale)
    peak = exponents.max()
    return (TWO_PI * lam * t) ** -2 * TWO_PI * math.exp(peak) * float(np.mean(np.exp(exponents - peak)))


def orbit_average_at(xa, xb, t, lam, quad_points=QUAD_POINTS, rtol=QUAD_RTOL):
    """
    Integral over theta of the flat kernel from x_a to the orbit of x_b.

    Periodic trapezoid rule; the result is accepted only if doubling the
    node count changes it by at most rtol relative.

    Args:
        xa, xb: Base points (lifted at angle 0)
        t: Elapsed time
        lam: Diffusion scale
        quad_points: Trapezoid nodes
        rtol: Doubling tolerance

    Returns:
        Float

    Raises:
        QuadratureNotConverged: If the doubling check fails
    """
    xa, xb = as_base(xa), as_base(xb)
    coarse = _trapezoid(xa, xb, t, lam, quad_points)
    fine = _trapezoid(xa, xb, t, lam, 2 * quad_points)
    change = abs(fine - coarse) / abs(fine) if fine else abs(coarse)
    if change > rtol:
        raise QuadratureNotConverged(
            f"orbit quadrature with {quad_points} nodes changed by {change:.3g} on doubling (tolerance {rtol:.3g})"
        )
    return fine


def closed_form_orbit_average(xa, xb, t, lam):
    """
    Exact orbit integral of the flat kernel.

    With A = Q*_a Q*_b + f~_a . f~_b and B = f~_a2 f~_b1 - f~_a1 f~_b2 the
    overlap of x_a with the rotated x_b is A cos(theta) + B sin(theta), so

        (2 pi lambda t)^{-2} exp(-(d_a + d_b)/(2 lambda t)) 2 pi I0(sqrt(A^2 + B^2)/(lambda t)).

    The exponent is combined with the scaled Bessel function to avoid overflow.
    """
    xa, xb = as_base(xa), as_base(xb)
    qa, fa1, fa2 = xa.as_array()
    qb, fb1, fb2 = xb.as_array()
    overlap = qa * qb + fa1 * fb1 + fa2 * fb2
    twist = fa2 * fb1 - fa1 * fb2
    z = math.hypot(overlap, twist) / (lam * t)
    exponent = -(xa.d + xb.d) / (2.0 * lam * t) + z
    return (TWO_PI * lam * t) ** -2 * TWO_PI * math.exp(exponent) * float(i0e(z))


def orbit_average_rhs(query, box_nodes=BOX_NODES):
    """
    Right side of the reduction relation, averaged over the query box.

    The Monte Carlo side estimates the sqrt(H)-weighted box average of
    G_M and multiplies it by d^{-1/4} at the box center. The matching
    average of the right side is therefore

        sum_k w_k sqrt(H_k) (d_k / d_c)^{1/4} rhs(x_k) / sum_k w_k sqrt(H_k)

    over Gauss-Legendre nodes x_k of the box.

    Raises:
        QuadratureNotConverged: If any node fails the doubling check
    """
    points, weights = query.box.gauss_nodes(box_nodes)
    sqrt_h = orbit_metric_arrays(*points)[3]
    d_center = query.box.center_point.d
    ratio = (killing_norm_arrays(*points) / d_center) ** 0.25
    lam = query.params.mu2kappa
    values = np.array(
        [orbit_average_at(query.start, points[:, k], query.t, lam, query.quad_points) for k in range(points.shape[1])]
    )
    density = weights * sqrt_h
    result = float(density @ (ratio * values) / density.sum())
    logger.debug("rhs over %d box node(s): %.10g", points.shape[1], result)
    return result
