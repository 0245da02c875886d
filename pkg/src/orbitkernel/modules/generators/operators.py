"""
Differential generators of the flat, reduced and orbit-space diffusions.

Coefficients are closed form; derivatives are second-order central
differences, so every result carries an O(step^2) truncation error and
an O(eps/step^2) rounding error. Fields with a closed-form gradient go
through a single difference quotient, which lowers the rounding error to
O(eps/step).
"""

import numpy as np

from orbitkernel.const import EPS_MIN, QUAD_POINTS, TWO_PI
from orbitkernel.errors import DegeneratePoint
from orbitkernel.modules.generators.fields import FDScheme, log_killing_norm
from orbitkernel.modules.geometry.bundle import geometry_at, orbit_metric_arrays, r_matrix_arrays
from orbitkernel.modules.geometry.points import adapted_arrays, as_base, to_adapted

_DEFAULT_FD = FDScheme()


def _guard_base(base, fd, eps_min):
    if base.q_star <= eps_min + fd.step:
        raise DegeneratePoint(f"q_star={base.q_star} is within one fd step of the radius guard")


def _stencil_derivatives(phi, center, h):
    """
    Value, gradient and Hessian of phi at center by central differences.

    Args:
        phi: Callable on coordinate arrays (one array per coordinate)
        center: 1-D array of coordinates
        h: Step

    Returns:
        Tuple (value, grad, hess)
    """
    dim = center.size
    offsets = [np.zeros(dim)]
    for i in range(dim):
        for sign in (1.0, -1.0):
            step = np.zeros(dim)
            step[i] = sign * h
            offsets.append(step)
    for i in range(dim):
        for j in range(i + 1, dim):
            for si, sj in ((1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)):
                step = np.zeros(dim)
                step[i] = si * h
                step[j] = sj * h
                offsets.append(step)
    points = center[:, None] + np.array(offsets).T
    values = np.asarray(phi(*points))

    value = values[0]
    grad = np.zeros(dim, dtype=values.dtype)
    hess = np.zeros((dim, dim), dtype=values.dtype)
    for i in range(dim):
        plus = values[1 + 2 * i]
        minus = values[2 + 2 * i]
        grad[i] = (plus - minus) / (2.0 * h)
        hess[i, i] = (plus - 2.0 * value + minus) / (h * h)
    k = 1 + 2 * dim
    for i in range(dim):
        for j in range(i + 1, dim):
            pp, pm, mp, mm = values[k : k + 4]
            hess[i, j] = hess[j, i] = (pp - pm - mp + mm) / (4.0 * h * h)
            k += 4
    return value, grad, hess


def apply_reduced_generator(phi, n, x, lam, fd=_DEFAULT_FD, eps_min=EPS_MIN):
    """
    Apply the n-th reduced generator to a field on the orbit space.

    (lambda/2) { d2/dQ*2 + (1/Q*) d/dQ* + R^{ab} d2/df~a df~b
                 - (1/Q*^2)(f~1 d/df~1 + f~2 d/df~2)
                 + (i n)(2/Q*^2)(f~2 d/df~1 - f~1 d/df~2) - n^2/Q*^2 }

    The rotation term has the orientation that makes
    e^{-i n a} (lambda/2) Laplace_4 e^{i n a} equal to this operator.

    Args:
        phi: ScalarField
        n: Fourier index
        x: Base point
        lam: Diffusion scale lambda
        fd: FDScheme

    Returns:
        Complex value of the operator applied to phi at x
    """
    base = as_base(x)
    _guard_base(base, fd, eps_min)
    q, f1, f2 = base.q_star, base.ft1, base.ft2
    value, grad, hess = _stencil_derivatives(phi, base.as_array(), fd.step)
    r11, r12, r22 = r_matrix_arrays(q, f1, f2)
    q2 = q * q

    result = (
        hess[0, 0]
        + grad[0] / q
        + r11 * hess[1, 1]
        + 2.0 * r12 * hess[1, 2]
        + r22 * hess[2, 2]
        - (f1 * grad[1] + f2 * grad[2]) / q2
        + 1j * n * (2.0 / q2) * (f2 * grad[1] - f1 * grad[2])
        - n * n * value / q2
    )
    return complex(0.5 * lam * result)


def apply_flat_laplacian_lifted(phi, n, p, fd=_DEFAULT_FD, eps_min=EPS_MIN):
    """
    Flat 4-D Laplacian of the equivariant lift phi(Q*, f~) e^{i n a}.

    Args:
        phi: ScalarField on the orbit space
        n: Fourier index
        p: EuclideanPoint
        fd: FDScheme

    Returns:
        Complex value of Laplace_4 [phi e^{i n a}] at p
    """
    if p.radius <= eps_min + fd.step:
        raise DegeneratePoint(f"point {p} is within one fd step of the radius guard")
    h = fd.step

    def lifted(q1, q2, f1, f2):
        q_star, ft1, ft2, angle = adapted_arrays(q1, q2, f1, f2)
        return phi(q_star, ft1, ft2) * np.exp(1j * n * angle)

    center = p.as_array()
    offsets = np.vstack([np.zeros(4), h * np.eye(4), -h * np.eye(4)])
    points = center[:, None] + offsets.T
    values = np.asarray(lifted(*points))
    total = np.sum(values[1:5] + values[5:9] - 2.0 * values[0])
    return complex(total / (h * h))


def _orbit_fluxes(phi, points, h):
    """
    sqrt(H) h^{ij} d_j phi at each column of points (3 x m).

    Uses the closed-form gradient of phi when it has one, which leaves a
    single difference quotient in apply_lb_orbit.
    """
    gradient = getattr(phi, "gradient", None)
    if gradient is not None:
        grads = np.array([np.asarray(g, dtype=complex) for g in gradient(*points)])
    else:
        grads = np.zeros((3, points.shape[1]), dtype=complex)
        for j in range(3):
            shift = np.zeros((3, 1))
            shift[j] = h
            grads[j] = (np.asarray(phi(*(points + shift))) - np.asarray(phi(*(points - shift)))) / (2.0 * h)
    r11, r12, r22, sqrt_h = orbit_metric_arrays(points[0], points[1], points[2])
    return sqrt_h * np.array(
        [
            grads[0],
            r11 * grads[1] + r12 * grads[2],
            r12 * grads[1] + r22 * grads[2],
        ]
    )


def apply_lb_orbit(phi, x, fd=_DEFAULT_FD, eps_min=EPS_MIN):
    """
    Laplace-Beltrami operator of the orbit-space metric in divergence form.

    H^{-1/2} d_i (h^{ij} H^{1/2} d_j phi) by nested central differences, or by
    one central difference of the fluxes when phi carries a closed-form gradient.

    Args:
        phi: ScalarField
        x: Base point
        fd: FDScheme

    Returns:
        Value of Laplace_M phi at x (real for real phi)
    """
    base = as_base(x)
    _guard_base(base, fd, eps_min)
    h = fd.step
    center = base.as_array()
    offsets = np.hstack([h * np.eye(3), -h * np.eye(3)])
    points = center[:, None] + offsets
    fluxes = _orbit_fluxes(phi, points, h)
    divergence = sum((fluxes[i, i] - fluxes[i, 3 + i]) / (2.0 * h) for i in range(3))
    _, _, _, sqrt_h = orbit_metric_arrays(*center)
    value = divergence / sqrt_h
    if np.iscomplexobj(value) and abs(value.imag) == 0.0:
        return float(value.real)
    return value


def equivariance_residual(phi, n, p, lam, fd=_DEFAULT_FD, eps_min=EPS_MIN):
    """
    |(lambda/2) Laplace_4[phi e^{i n a}] - e^{i n a} L_red^{(n)} phi| at p.
    """
    x = to_adapted(p, eps_min)
    flat = apply_flat_laplacian_lifted(phi, n, p, fd, eps_min)
    reduced = apply_reduced_generator(phi, n, x.base, lam, fd, eps_min)
    return abs(0.5 * lam * flat - np.exp(1j * n * x.angle) * reduced)


def jacobian_scalar_fd(x, fd=_DEFAULT_FD, eps_min=EPS_MIN):
    """
    Laplace_M sigma + 1/4 <d sigma, d sigma>_M by finite differences (closed form: 3/d).
    """
    base = as_base(x)
    sigma = log_killing_norm()
    laplacian = apply_lb_orbit(sigma, base, fd, eps_min)
    grad = np.array(sigma.gradient(*base.as_array()))
    h_inv = geometry_at(base, eps_min).h_orbit_inv
    return float(np.real(laplacian) + 0.25 * grad @ h_inv @ grad)


def jacobian_potential_fd(x, lam, fd=_DEFAULT_FD, eps_min=EPS_MIN):
    """J = -(lambda/8)(Laplace_M sigma + 1/4 |d sigma|^2) evaluated numerically."""
    return -(lam / 8.0) * jacobian_scalar_fd(x, fd, eps_min)


def reduced_drift(x, lam):
    """Drift of the process xi generated by the n = 0 reduced operator."""
    base = as_base(x)
    q2 = base.q_star**2
    return 0.5 * lam * np.array([1.0 / base.q_star, -base.ft1 / q2, -base.ft2 / q2])


def orbit_drift(x, lam):
    """Drift of the process xi~ generated by (lambda/2) Laplace_M."""
    base = as_base(x)
    q, d = base.q_star, base.d
    q2 = q * q
    return 0.5 * lam * np.array([1.0 / q - q / d, -base.ft1 / q2 - base.ft1 / d, -base.ft2 / q2 - base.ft2 / d])


def drift_gap(x, lam):
    """reduced_drift - orbit_drift = (lambda/2)(Q*, f~1, f~2)/d = (lambda/4) h^{-1} d sigma."""
    base = as_base(x)
    return 0.5 * lam * base.as_array() / base.d


def dhat_rate(x, n, lam):
    """Decay rate of the filtering factor in its solved form, -lambda n^2 / (2d)."""
    return -lam * n * n / (2.0 * as_base(x).d)


def dhat_rate_via_ito(x, n, lam):
    """
    The same rate from the linear equation plus the Ito correction of its noise term.

    -lambda n^2/(2 Q*^2) + (lambda n^2/2) A^T R A
    """
    geometry = geometry_at(x)
    connection = geometry.conn[1:]
    twisted = float(connection @ geometry.r_matrix @ connection)
    return -lam * n * n / (2.0 * geometry.gamma) + 0.5 * lam * n * n * twisted


def fourier_coefficient(field, n, x, quad_points=QUAD_POINTS):
    """
    c_n = (1/2pi) int_0^{2pi} phi(Q*, f~, theta) e^{-i n theta} d theta by the trapezoid rule.

    Args:
        field: Callable (q_star, ft1, ft2, angle) accepting an angle array
        n: Fourier index
        x: Base point
        quad_points: Number of nodes

    Returns:
        Complex coefficient
    """
    base = as_base(x)
    theta = TWO_PI * np.arange(quad_points) / quad_points
    values = np.asarray(field(base.q_star, base.ft1, base.ft2, theta))
    return complex(np.mean(values * np.exp(-1j * n * theta)))
