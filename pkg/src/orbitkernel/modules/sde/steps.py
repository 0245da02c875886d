"""
Euler-Maruyama steps of the flat, adapted, transformed and reduced processes.

A PathState holds a batch of m trajectories as arrays; one trajectory is
a batch of one. Coordinates are stored row-wise:

    original   (Q1, Q2, f1, f2)
    adapted    (Q*, f~1, f~2, a)
    reduced    (Q*, f~1, f~2)

Paths whose proposed position falls inside the axis guard are absorbed:
they keep their last valid coordinates, stop accumulating and are
reported as discarded. With on_axis="raise" an AxisHit is raised instead.
"""

import logging
from dataclasses import dataclass, replace

import numpy as np

from orbitkernel.errors import AxisHit, ConfigError
from orbitkernel.modules.geometry.bundle import (
    jacobian_potential_arrays,
    killing_norm_arrays,
    sqrt_r_arrays,
    z_arrays,
)
from orbitkernel.modules.geometry.points import (
    AdaptedPoint,
    BasePoint,
    EuclideanPoint,
    adapted_arrays,
    as_base,
    from_adapted,
    normalize_angle,
    to_adapted,
)
from orbitkernel.modules.sde.params import noise_scale

logger = logging.getLogger(__name__)

STATE_KINDS = ("original", "adapted", "reduced")
AXIS_POLICIES = ("discard", "raise")
REDUCED_MODES = ("xi", "xi_tilde")


@dataclass(frozen=True)
class PathState:
    """
    Batch of trajectories of one process.

    Attributes:
        kind: "original", "adapted" or "reduced"
        coords: Array (4, m) or (3, m) in the layout of the kind
        time: Elapsed time
        weight_log: Accumulated Feynman-Kac log-weight per path
        phase: Accumulated filtering factor per path (1 when n = 0)
        alive: False for paths absorbed at the axis guard
    """

    kind: str
    coords: np.ndarray
    time: float = 0.0
    weight_log: np.ndarray = None
    phase: np.ndarray = None
    alive: np.ndarray = None

    def __post_init__(self):
        if self.kind not in STATE_KINDS:
            raise ConfigError(f"unknown path state kind {self.kind!r}")
        size = self.coords.shape[1]
        if self.weight_log is None:
            object.__setattr__(self, "weight_log", np.zeros(size))
        if self.phase is None:
            object.__setattr__(self, "phase", np.ones(size, dtype=complex))
        if self.alive is None:
            object.__setattr__(self, "alive", np.ones(size, dtype=bool))

    @property
    def size(self):
        return self.coords.shape[1]

    @classmethod
    def start(cls, kind, point, size=1):
        """
        Replicate a starting point into a batch.

        Args:
            kind: State kind
            point: EuclideanPoint, AdaptedPoint or BasePoint (lifted at angle 0)
            size: Number of paths

        Returns:
            PathState at time 0
        """
        if kind == "original":
            if not isinstance(point, EuclideanPoint):
                point = from_adapted(point if isinstance(point, AdaptedPoint) else as_base(point).lift(0.0))
            values = point.as_array()
        elif kind == "adapted":
            if isinstance(point, EuclideanPoint):
                point = to_adapted(point)
            elif not isinstance(point, AdaptedPoint):
                point = as_base(point).lift(0.0)
            values = point.as_array()
        else:
            if isinstance(point, EuclideanPoint):
                point = to_adapted(point)
            values = as_base(point).as_array()
        coords = np.repeat(values[:, None], size, axis=1)
        return cls(kind=kind, coords=coords)

    def base_arrays(self):
        """Orbit-space coordinates (Q*, f~1, f~2) as a (3, m) array."""
        if self.kind == "original":
            q_star, ft1, ft2, _ = adapted_arrays(*self.coords)
            return np.array([q_star, ft1, ft2])
        return self.coords[:3]

    def angles(self):
        """Group angle per path, or None for the reduced kind."""
        if self.kind == "original":
            return adapted_arrays(*self.coords)[3]
        if self.kind == "adapted":
            return self.coords[3]
        return None

    def base_point(self, index=0):
        return BasePoint.from_array(self.base_arrays()[:, index])


def _check_kind(state, *kinds):
    if state.kind not in kinds:
        raise ConfigError(f"step expects a {' or '.join(kinds)} state, got {state.kind}")


def _commit(state, proposed, radius, params, on_axis):
    if on_axis not in AXIS_POLICIES:
        raise ConfigError(f"on_axis must be one of {AXIS_POLICIES}, got {on_axis!r}")
    # NaN radii count as hits
    hit = state.alive & ~(radius >= params.eps_min)
    count = int(np.count_nonzero(hit))
    if count:
        if on_axis == "raise":
            raise AxisHit(count)
        logger.debug("%d path(s) absorbed at t=%.6g", count, state.time + params.dt)
    alive = state.alive & ~hit
    coords = np.where(alive, proposed, state.coords)
    return replace(state, coords=coords, time=state.time + params.dt, alive=alive)


def step_original(state, dw, params, on_axis="discard"):
    """
    Driftless flat step: every coordinate moves by sqrt(lambda dt) dw_i.

    Args:
        state: PathState of kind "original"
        dw: Normals of shape (4, m)
        params: SimParams
        on_axis: "discard" or "raise"

    Returns:
        PathState
    """
    _check_kind(state, "original")
    proposed = state.coords + noise_scale(params) * dw
    radius = np.hypot(proposed[0], proposed[1])
    return _commit(state, proposed, radius, params, on_axis)


def step_adapted(state, dw, params, on_axis="discard"):
    """
    The flat diffusion written in adapted coordinates.

    dQ*   = (lambda/2)(1/Q*) dt + s w_m
    df~a  = -(lambda/2)(f~a/Q*^2) dt + s(-(1/Q*) eps^{ab} f~b w_alpha + w_a)
    da    = -s w_alpha / Q*

    with s = sqrt(lambda dt), eps^{12} = +1 and dw rows (w_m, w_alpha, w_1, w_2).
    """
    _check_kind(state, "adapted")
    lam, dt = params.mu2kappa, params.dt
    s = noise_scale(params)
    q, f1, f2, angle = state.coords
    w_m, w_alpha, w_1, w_2 = dw
    q2 = q * q

    proposed = np.array(
        [
            q + 0.5 * lam * dt / q + s * w_m,
            f1 - 0.5 * lam * dt * f1 / q2 + s * (-f2 / q * w_alpha + w_1),
            f2 - 0.5 * lam * dt * f2 / q2 + s * (f1 / q * w_alpha + w_2),
            normalize_angle(angle - s * w_alpha / q),
        ]
    )
    return _commit(state, proposed, proposed[0], params, on_axis)


def step_transformed(state, dw, params, on_axis="discard"):
    """
    Base noise decoupled from the group noise.

    dQ*   = (lambda/2)(1/Q*) dt + s w~_m
    df~a  = -(lambda/2)(f~a/Q*^2) dt + s X~^a_b w~^b
    da    = s(Z_c X~^c_b w~^b + d^{-1/2} w~_beta)

    with dw rows (w~_m, w~^1, w~^2, w~_beta).
    """
    _check_kind(state, "adapted")
    lam, dt = params.mu2kappa, params.dt
    s = noise_scale(params)
    q, f1, f2, angle = state.coords
    w_m, w_1, w_2, w_beta = dw
    q2 = q * q
    x11, x12, x22 = sqrt_r_arrays(q, f1, f2)
    z1, z2 = z_arrays(q, f1, f2)
    noise_1 = x11 * w_1 + x12 * w_2
    noise_2 = x12 * w_1 + x22 * w_2
    d = killing_norm_arrays(q, f1, f2)

    proposed = np.array(
        [
            q + 0.5 * lam * dt / q + s * w_m,
            f1 - 0.5 * lam * dt * f1 / q2 + s * noise_1,
            f2 - 0.5 * lam * dt * f2 / q2 + s * noise_2,
            normalize_angle(angle + s * (z1 * noise_1 + z2 * noise_2 + w_beta / np.sqrt(d))),
        ]
    )
    return _commit(state, proposed, proposed[0], params, on_axis)


def reduced_drift_arrays(q, f1, f2, lam, mode):
    """Drift of xi (n = 0 reduced generator) or xi~ ((lambda/2) Laplace_M) on arrays."""
    q2 = q * q
    if mode == "xi":
        return 0.5 * lam * np.array([1.0 / q, -f1 / q2, -f2 / q2])
    if mode == "xi_tilde":
        d = killing_norm_arrays(q, f1, f2)
        return 0.5 * lam * np.array([1.0 / q - q / d, -f1 / q2 - f1 / d, -f2 / q2 - f2 / d])
    raise ConfigError(f"mode must be one of {REDUCED_MODES}, got {mode!r}")


def step_reduced(state, dw, params, mode="xi", on_axis="discard"):
    """
    Step of the orbit-space process xi or xi~; diffusion diag(1, X~) sqrt(lambda dt).

    Args:
        state: PathState of kind "reduced"
        dw: Normals of shape (3, m)
        params: SimParams
        mode: "xi" or "xi_tilde"
        on_axis: "discard" or "raise"

    Returns:
        PathState
    """
    _check_kind(state, "reduced")
    s = noise_scale(params)
    q, f1, f2 = state.coords
    drift = reduced_drift_arrays(q, f1, f2, params.mu2kappa, mode)
    x11, x12, x22 = sqrt_r_arrays(q, f1, f2)
    w_m, w_1, w_2 = dw

    proposed = state.coords + params.dt * drift
    proposed += s * np.array([w_m, x11 * w_1 + x12 * w_2, x12 * w_1 + x22 * w_2])
    return _commit(state, proposed, proposed[0], params, on_axis)


def accumulate_weights(state, x_prev, x_next, n, params, dw_used=None, include_jacobian=True):
    """
    Add one step of the Feynman-Kac exponent and, for n != 0, of the filtering factor.

    weight_log += dt [V(x)/(lambda m) + J(x)] at the midpoint of x_prev and x_next.
    phase     *= exp(-lambda n^2 dt/(2d) + i n sqrt(lambda dt) Z_c X~^c_b w~^b)

    The noise coefficient is taken at x_prev; the dt terms at the midpoint.

    Args:
        state: PathState after the step
        x_prev: Base coordinates (3, m) before the step
        x_next: Base coordinates (3, m) after the step
        n: Fourier index
        params: SimParams
        dw_used: The two base noises w~^1, w~^2 of the step, shape (2, m); needed when n != 0
        include_jacobian: Drop J from the exponent when False

    Returns:
        PathState
    """
    lam, dt = params.mu2kappa, params.dt
    mid = 0.5 * (np.asarray(x_prev) + np.asarray(x_next))
    rate = np.zeros(mid.shape[1])
    if not params.potential.is_zero:
        rate += params.potential(*mid) / (lam * params.mass_m)
    if include_jacobian:
        rate += jacobian_potential_arrays(*mid, lam)
    weight_log = np.where(state.alive, state.weight_log + dt * rate, state.weight_log)

    phase = state.phase
    if n != 0:
        if dw_used is None:
            raise ValueError("the base noise of the step is needed for n != 0")
        q, f1, f2 = x_prev
        x11, x12, x22 = sqrt_r_arrays(q, f1, f2)
        z1, z2 = z_arrays(q, f1, f2)
        w_1, w_2 = dw_used
        angle_noise = z1 * (x11 * w_1 + x12 * w_2) + z2 * (x12 * w_1 + x22 * w_2)
        exponent = -lam * n * n * dt / (2.0 * killing_norm_arrays(*mid)) + 1j * n * noise_scale(params) * angle_noise
        phase = np.where(state.alive, phase * np.exp(exponent), phase)

    return replace(state, weight_log=weight_log, phase=phase)
