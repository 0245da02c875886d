"""
Closed-form geometry of the SO(2) bundle R'^2 x R^2 -> M~ at a point.

Basis order for the total space is (dQ*, df~1, df~2, da); for the orbit
space it is (dQ*, df~1, df~2). All matrices are dense numpy arrays.

The *_arrays helpers evaluate the pieces needed by the path simulators
elementwise on arrays of base coordinates.
"""

import json
import math
from dataclasses import dataclass, fields

import numpy as np

from orbitkernel.const import EPS_MIN, RHO2_SERIES_CUTOFF
from orbitkernel.errors import DegeneratePoint
from orbitkernel.modules.geometry.points import as_base


def killing_norm_arrays(q_star, ft1, ft2):
    """d = Q*^2 + f~1^2 + f~2^2, elementwise."""
    return q_star * q_star + ft1 * ft1 + ft2 * ft2


def r_matrix_arrays(q_star, ft1, ft2):
    """
    Entries (R11, R12, R22) of the f~-block of the inverse metric.
    """
    inv_q2 = 1.0 / (q_star * q_star)
    return (
        1.0 + ft2 * ft2 * inv_q2,
        -ft1 * ft2 * inv_q2,
        1.0 + ft1 * ft1 * inv_q2,
    )


def sqrt_r_arrays(q_star, ft1, ft2):
    """
    Entries (X11, X12, X22) of the symmetric square root of R.

    R has eigenvector v = (f~2, -f~1) with eigenvalue d/Q*^2 and is the
    identity on v's complement, so X = I + (sqrt(d)/Q* - 1) v v^T / rho^2.
    At rho -> 0 the limit X = I is used.
    """
    rho2 = ft1 * ft1 + ft2 * ft2
    d = q_star * q_star + rho2
    small = rho2 < RHO2_SERIES_CUTOFF
    safe_rho2 = np.where(small, 1.0, rho2)
    coeff = np.where(small, 0.0, (np.sqrt(d) / q_star - 1.0) / safe_rho2)
    x11 = 1.0 + coeff * ft2 * ft2
    x12 = -coeff * ft1 * ft2
    x22 = 1.0 + coeff * ft1 * ft1
    if np.ndim(x11) == 0:
        return float(x11), float(x12), float(x22)
    return x11, x12, x22


def z_arrays(q_star, ft1, ft2):
    """Z = (f~2/d, -f~1/d), the angle noise weights on the f~ noise."""
    d = killing_norm_arrays(q_star, ft1, ft2)
    return ft2 / d, -ft1 / d


def orbit_metric_arrays(q_star, ft1, ft2):
    """
    Entries of the orbit-space inverse metric h^{ij} = 1 (+) R and sqrt(H).

    Returns:
        Tuple (r11, r12, r22, sqrt_h) with sqrt_h = Q*/sqrt(d)
    """
    r11, r12, r22 = r_matrix_arrays(q_star, ft1, ft2)
    sqrt_h = q_star / np.sqrt(killing_norm_arrays(q_star, ft1, ft2))
    return r11, r12, r22, sqrt_h


@dataclass(frozen=True)
class GeometryBundle:
    """
    Every geometric object of the bundle evaluated at one base point.

    Attributes:
        g_adapted: 4x4 metric G in basis (dQ*, df~1, df~2, da)
        g_inverse: 4x4 inverse metric
        det_g: det G = Q*^2
        d_scalar: d = Q*^2 + |f~|^2
        conn: Mechanical connection (A_Q*, A_f1, A_f2)
        killing_q: Killing field on the gauge surface (0, -Q*)
        killing_f: Killing field on the vector space (-f~2, f~1)
        lambda2: Lambda_2 = -1/Q*
        phi_fp: Faddeev-Popov matrix Phi = -Q*
        proj_n: Projector components N^b_2 = (-f~2/Q*, f~1/Q*)
        r_matrix: 2x2 R^{ab} (= horizontal inverse metric on f~)
        x_sqrt: 2x2 symmetric square root of R
        z_vec: Z = (f~2/d, -f~1/d)
        x_group: Group-noise coefficient d^{-1/2}
        h_orbit: 3x3 orbit-space metric
        h_orbit_inv: 3x3 inverse orbit-space metric
        h_det: H = Q*^2/d
        sigma: ln d
        gamma: Q*^2, the orbit metric of the gauge-surface factor
    """

    point: object
    g_adapted: np.ndarray
    g_inverse: np.ndarray
    det_g: float
    d_scalar: float
    conn: np.ndarray
    killing_q: np.ndarray
    killing_f: np.ndarray
    lambda2: float
    phi_fp: float
    proj_n: np.ndarray
    r_matrix: np.ndarray
    x_sqrt: np.ndarray
    z_vec: np.ndarray
    x_group: float
    h_orbit: np.ndarray
    h_orbit_inv: np.ndarray
    h_det: float
    sigma: float
    gamma: float

    def to_dict(self):
        """Plain-python view of every field except the point."""
        out = {}
        for field in fields(self):
            if field.name == "point":
                continue
            value = getattr(self, field.name)
            out[field.name] = value.tolist() if isinstance(value, np.ndarray) else float(value)
        return out

    def to_json(self):
        """
        Debug dump: JSON object keyed by field name, numbers with 17 significant digits.
        """
        return _dump_json(self.to_dict())


def _dump_json(value):
    if isinstance(value, dict):
        items = (f"{json.dumps(key)}: {_dump_json(item)}" for key, item in value.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(value, list):
        return "[" + ", ".join(_dump_json(item) for item in value) + "]"
    return format(float(value), ".17g")


def geometry_at(x, eps_min=EPS_MIN):
    """
    Evaluate the bundle geometry at a point.

    Args:
        x: AdaptedPoint, BasePoint or (q_star, ft1, ft2); the angle is irrelevant
        eps_min: Radius guard

    Returns:
        GeometryBundle

    Raises:
        DegeneratePoint: If q_star < eps_min
    """
    base = as_base(x)
    q, f1, f2 = base.q_star, base.ft1, base.ft2
    if q < eps_min:
        raise DegeneratePoint(f"q_star={q} is below the radius guard {eps_min}")

    q2 = q * q
    rho2 = f1 * f1 + f2 * f2
    d = q2 + rho2

    g_adapted = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, -f2],
            [0.0, 0.0, 1.0, f1],
            [0.0, -f2, f1, d],
        ]
    )
    g_inverse = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, (f2 * f2 + q2) / q2, -f1 * f2 / q2, f2 / q2],
            [0.0, -f1 * f2 / q2, (f1 * f1 + q2) / q2, -f1 / q2],
            [0.0, f2 / q2, -f1 / q2, 1.0 / q2],
        ]
    )

    conn = np.array([0.0, -f2 / d, f1 / d])
    killing_q = np.array([0.0, -q])
    killing_f = np.array([-f2, f1])
    proj_n = killing_f / q

    r11, r12, r22 = r_matrix_arrays(q, f1, f2)
    r_matrix = np.array([[r11, r12], [r12, r22]])
    x11, x12, x22 = sqrt_r_arrays(q, f1, f2)
    x_sqrt = np.array([[x11, x12], [x12, x22]])

    h_orbit = np.array(
        [
            [1.0, 0.0, 0.0],
            [0.0, (f1 * f1 + q2) / d, f1 * f2 / d],
            [0.0, f1 * f2 / d, (f2 * f2 + q2) / d],
        ]
    )
    h_orbit_inv = np.zeros((3, 3))
    h_orbit_inv[0, 0] = 1.0
    h_orbit_inv[1:, 1:] = r_matrix

    return GeometryBundle(
        point=base,
        g_adapted=g_adapted,
        g_inverse=g_inverse,
        det_g=q2,
        d_scalar=d,
        conn=conn,
        killing_q=killing_q,
        killing_f=killing_f,
        lambda2=-1.0 / q,
        phi_fp=-q,
        proj_n=proj_n,
        r_matrix=r_matrix,
        x_sqrt=x_sqrt,
        z_vec=-conn[1:],
        x_group=1.0 / math.sqrt(d),
        h_orbit=h_orbit,
        h_orbit_inv=h_orbit_inv,
        h_det=q2 / d,
        sigma=math.log(d),
        gamma=q2,
    )


def jacobian_potential(x, lam):
    """
    Reduction Jacobian J = -(lambda/8) * 3/d.

    Args:
        x: Point (any form accepted by geometry_at)
        lam: Diffusion scale lambda = mu^2 kappa, positive

    Returns:
        J as a float; always negative and tending to 0 as d grows
    """
    if not lam > 0.0:
        raise ValueError(f"lambda must be positive, got {lam}")
    return -(lam / 8.0) * (3.0 / as_base(x).d)


def jacobian_potential_arrays(q_star, ft1, ft2, lam):
    return -(lam / 8.0) * (3.0 / killing_norm_arrays(q_star, ft1, ft2))


def semigroup_volume_density(x):
    """sqrt(H) = Q*/sqrt(d), the Riemannian volume density of the orbit space."""
    base = as_base(x)
    return base.q_star / math.sqrt(base.d)


def general_formula_connection(x):
    """
    Mechanical connection from the general-group expressions.

    A_i = d^{-1} K^C G_{DC} dQ*^D/dx^i on the gauge surface and
    A_p = d^{-1} K^r G_{rp} on the vector space, with the flat metric.
    """
    base = as_base(x)
    q, f1, f2 = base.q_star, base.ft1, base.ft2
    d = base.d
    killing_on_gauge = np.array([0.0, -q])
    # dQ*^D / dQ*_1 along the gauge surface Q2 = 0
    tangent = np.array([1.0, 0.0])
    killing_f = np.array([-f2, f1])
    return np.concatenate(([killing_on_gauge @ tangent / d], killing_f / d))


def general_formula_horizontal_metric(x):
    """
    Horizontal metric from the adapted metric by projecting out the orbit direction.

    h_ij = G_ij - G_ia G_aj / G_aa on the (Q*, f~) block.
    """
    g = geometry_at(x).g_adapted
    block = g[:3, :3]
    mixed = g[:3, 3]
    return block - np.outer(mixed, mixed) / g[3, 3]


def forward_operator_symbolic(hbar="hbar", m="m"):
    """
    Forward-equation operator on the orbit space and its kappa = i Hamiltonian, as strings.
    """
    forward = (
        f"H_kappa = ({hbar}*kappa/(2*{m})) * Laplace_M "
        f"- ({hbar}*kappa/(8*{m})) * (3/(q_star^2 + ft1^2 + ft2^2)) "
        f"+ (1/({hbar}*kappa)) * V"
    )
    schroedinger = f"H = -({hbar}/kappa) * H_kappa |_(kappa = i)"
    return {"forward_operator": forward, "hamiltonian": schroedinger}


def faddeev_popov(x):
    """
    Phi = K_(Q) . grad chi = -Q* for the zero-section gauge chi = Q2.

    Nonzero away from the axis, which certifies that the gauge surface
    meets every orbit once and transversally.
    """
    return -as_base(x).q_star
