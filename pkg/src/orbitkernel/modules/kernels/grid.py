"""
Finite-volume solver for the reduced forward equation.

    du/dt = (lambda/2) Laplace_M u + J u

in coordinates (Q*, rho, phi), where (rho, phi) are polar coordinates of
f~. The orbit metric is diagonal there,

    Laplace_M u = w^{-1} [d_Q (w d_Q u) + d_rho (w d_rho u)] + (1/rho^2 + 1/Q*^2) d_phi^2 u,

with w = Q* rho / sqrt(Q*^2 + rho^2), i.e. sqrt(H) times the polar
Jacobian. Cells are centred at (i + 1/2) h in Q* and rho, so no node sits
on an axis. The (Q*, rho) part is explicit Euler with w-weighted face
fluxes; w vanishes on the faces Q* = 0 and rho = 0, which makes them
no-flux, and the outer walls are absorbing. The angular part is applied
exactly per Fourier mode in phi and J u exactly per cell, Strang-split
around the flux step. Total w-weighted mass therefore changes only
through J and the outer walls, and both are booked.

The near-delta start is a Gaussian of standard deviation s in the metric
at the start, displaced by the drift over s^2/lambda. It stands in for
the kernel at time s^2/lambda; the solver runs for the remaining
t - s^2/lambda.
"""

import logging
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import fft
from scipy.interpolate import RegularGridInterpolator

from orbitkernel.const import (
    BOUNDARY_MASS_TOL,
    BOX_NODES,
    GRID_COURANT,
    GRID_COURANT_MAX,
    GRID_H,
    GRID_MARGIN,
    GRID_N_PHI,
    GRID_N_PHI_MIN,
    GRID_WIDTH_CELLS,
    TWO_PI,
)
from orbitkernel.errors import BoundaryMassLoss, ConfigError, StabilityViolation
from orbitkernel.modules.generators.operators import orbit_drift
from orbitkernel.modules.geometry.bundle import (
    geometry_at,
    jacobian_potential,
    jacobian_potential_arrays,
    orbit_metric_arrays,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpec:
    """
    Resolution and domain of the grid solver.

    Attributes:
        h: Cell size in Q* and rho
        q_max: Absorbing wall in Q*, or None to size it from the query
        f_radius: Absorbing wall in |f~|, or None to size it from the query
        n_phi: Angular nodes (even)
        margin: Distance of unset walls from the start and the box, in units of sqrt(lambda t)
        width_cells: Width of the initial Gaussian in cells
        courant: dt = courant * h^2 / (lambda * kappa_max) when dt is not given
        dt: Explicit time step, or None
        include_jacobian: Keep the J u term
    """

    h: float = GRID_H
    q_max: object = None
    f_radius: object = None
    n_phi: int = GRID_N_PHI
    margin: float = GRID_MARGIN
    width_cells: float = GRID_WIDTH_CELLS
    courant: float = GRID_COURANT
    dt: object = None
    include_jacobian: bool = True

    def __post_init__(self):
        if not self.h > 0.0:
            raise ConfigError(f"grid spacing must be positive, got {self.h}")
        for name in ("q_max", "f_radius"):
            wall = getattr(self, name)
            if wall is not None and not wall > self.h:
                raise ConfigError(f"{name} must exceed the grid spacing, got {wall}")
        if int(self.n_phi) != self.n_phi or self.n_phi < GRID_N_PHI_MIN or self.n_phi % 2:
            raise ConfigError(f"n_phi must be an even integer >= {GRID_N_PHI_MIN}, got {self.n_phi}")
        object.__setattr__(self, "n_phi", int(self.n_phi))
        if not self.margin > 0.0:
            raise ConfigError(f"margin must be positive, got {self.margin}")
        if not self.width_cells > 0.0:
            raise ConfigError(f"width_cells must be positive, got {self.width_cells}")
        if not 0.0 < self.courant <= GRID_COURANT_MAX:
            raise StabilityViolation(f"courant number must lie in (0, {GRID_COURANT_MAX}], got {self.courant}")

    @property
    def width(self):
        return self.width_cells * self.h

    def refined(self):
        """The same domain at half the spacing and twice the angular nodes."""
        return replace(self, h=0.5 * self.h, n_phi=2 * self.n_phi, dt=None)

    def sized_for(self, query):
        """This spec with unset walls placed margin * sqrt(lambda t) beyond the start and the box."""
        reach = self.margin * math.sqrt(query.params.mu2kappa * query.t)
        start = query.start
        lower, upper = query.box.lower, query.box.upper
        q_max = self.q_max
        if q_max is None:
            q_max = max(start.q_star, upper[0]) + reach
        f_radius = self.f_radius
        if f_radius is None:
            box_rho = math.hypot(max(abs(lower[1]), abs(upper[1])), max(abs(lower[2]), abs(upper[2])))
            f_radius = max(math.hypot(start.ft1, start.ft2), box_rho) + reach
        return replace(self, q_max=q_max, f_radius=f_radius)

    def allows(self, q_star, ft1, ft2):
        """Mask of points strictly inside the domain; unset walls do not bound it."""
        q_max = np.inf if self.q_max is None else self.q_max
        f_radius = np.inf if self.f_radius is None else self.f_radius
        return (q_star > 0.0) & (q_star < q_max) & (np.hypot(ft1, ft2) < f_radius)

    def to_dict(self):
        return {
            "h": self.h,
            "q_max": self.q_max,
            "f_radius": self.f_radius,
            "n_phi": self.n_phi,
            "margin": self.margin,
            "width_cells": self.width_cells,
            "courant": self.courant,
            "dt": self.dt,
            "include_jacobian": self.include_jacobian,
        }


@dataclass(frozen=True)
class GridSolution:
    """
    Attributes:
        axes: Cell centres (q, rho, phi)
        u: Kernel values at the cell centres, density w.r.t. the Riemannian volume
        dt: Time step used
        n_steps: Steps taken
        initial_mass: Riemannian mass at the start
        final_mass: Riemannian mass at the end
        jacobian_loss: Mass removed by the J u term
        absorbed_fraction: Mass lost at the outer walls relative to initial_mass
    """

    axes: tuple
    u: np.ndarray
    dt: float
    n_steps: int
    initial_mass: float
    final_mass: float
    jacobian_loss: float
    absorbed_fraction: float

    def box_average(self, box, n=BOX_NODES):
        """sqrt(H)-weighted box average of u by interpolation at Gauss-Legendre nodes."""
        q_axis, rho_axis, phi_axis = self.axes
        # phi is periodic; below the first centres u is flat (no-flux faces)
        interpolator = RegularGridInterpolator(
            (q_axis, rho_axis, np.append(phi_axis, TWO_PI)),
            np.concatenate([self.u, self.u[:, :, :1]], axis=2),
            bounds_error=False,
            fill_value=0.0,
        )
        points, weights = box.gauss_nodes(n)
        density = weights * orbit_metric_arrays(*points)[3]
        polar = np.array(
            [
                np.maximum(points[0], q_axis[0]),
                np.maximum(np.hypot(points[1], points[2]), rho_axis[0]),
                np.mod(np.arctan2(points[2], points[1]), TWO_PI),
            ]
        )
        values = interpolator(polar.T)
        return float(density @ values / density.sum())


def _weight(q, rho):
    return q * rho / np.hypot(q, rho)


def _flux_step(u, w, w_q, w_r, scale):
    """One explicit Euler step of w^{-1} div(w grad u); ghost cells beyond the outer walls hold zero."""
    flux_q = np.zeros((u.shape[0] + 1,) + u.shape[1:])
    flux_q[1:-1] = w_q[1:-1] * (u[1:] - u[:-1])
    flux_q[-1] = -w_q[-1] * u[-1]
    flux_r = np.zeros((u.shape[0], u.shape[1] + 1, u.shape[2]))
    flux_r[:, 1:-1] = w_r[:, 1:-1] * (u[:, 1:] - u[:, :-1])
    flux_r[:, -1] = -w_r[:, -1] * u[:, -1]
    divergence = (flux_q[1:] - flux_q[:-1]) + (flux_r[:, 1:] - flux_r[:, :-1])
    return u + scale * divergence / w


def _angular_step(u, angular):
    """Angular diffusion, exact per Fourier mode in phi."""
    return fft.irfft(fft.rfft(u, axis=2) * angular, n=u.shape[2], axis=2)


def solve_grid(query, grid=None):
    """
    Evolve the near-delta start to time query.t.

    Args:
        query: KernelQuery (start, box, t and lambda are used)
        grid: GridSpec; unset walls are sized from the query

    Returns:
        GridSolution

    Raises:
        ConfigError: If the start lies outside the domain or t is shorter than the start offset
        StabilityViolation: If an explicit dt exceeds the stability bound
    """
    grid = (grid or GridSpec()).sized_for(query)
    lam = query.params.mu2kappa
    h = grid.h
    start = query.start
    if not grid.allows(*start.as_array()):
        raise ConfigError(f"start {tuple(start.as_array())} lies outside the grid domain")
    offset = grid.width**2 / lam
    if query.t <= offset:
        raise ConfigError(f"t={query.t} must exceed the start offset {offset:.3g} = width^2/lambda")

    n_q = math.ceil(grid.q_max / h - 1e-9)
    n_rho = math.ceil(grid.f_radius / h - 1e-9)
    q_axis = h * (np.arange(n_q) + 0.5)
    rho_axis = h * (np.arange(n_rho) + 0.5)
    phi_axis = TWO_PI * np.arange(grid.n_phi) / grid.n_phi
    d_phi = TWO_PI / grid.n_phi

    Q, RHO = np.meshgrid(q_axis, rho_axis, indexing="ij")
    w = _weight(Q, RHO)[..., None]
    w_q = _weight(*np.meshgrid(h * np.arange(n_q + 1), rho_axis, indexing="ij"))[..., None]
    w_r = _weight(*np.meshgrid(q_axis, h * np.arange(n_rho + 1), indexing="ij"))[..., None]
    volume = w * h * h * d_phi

    kappa_max = float(np.max((w_q[1:] + w_q[:-1] + w_r[:, 1:] + w_r[:, :-1]) / (4.0 * w)))
    bound = GRID_COURANT_MAX * h * h / (lam * kappa_max)
    dt = grid.courant * h * h / (lam * kappa_max) if grid.dt is None else float(grid.dt)
    if dt > bound * (1.0 + 1e-12):
        raise StabilityViolation(f"grid dt={dt:.3g} exceeds the explicit bound {bound:.3g}")
    n_steps = math.ceil((query.t - offset) / dt)
    dt = (query.t - offset) / n_steps

    modes = np.arange(grid.n_phi // 2 + 1)
    angular_rate = 0.5 * lam * (1.0 / RHO**2 + 1.0 / Q**2)
    angular = np.exp(-0.5 * dt * angular_rate[..., None] * modes**2)
    if grid.include_jacobian:
        decay = np.exp(0.5 * dt * jacobian_potential_arrays(Q, RHO, np.zeros_like(RHO), lam))[..., None]
    else:
        decay = np.ones_like(w)

    # Lebesgue-density Gaussian around the drifted start, as a Riemannian density
    center = start.as_array() + offset * orbit_drift(start, lam)
    metric = geometry_at(start).h_orbit
    delta = np.array(
        [
            np.broadcast_to(Q[..., None], Q.shape + (grid.n_phi,)) - center[0],
            RHO[..., None] * np.cos(phi_axis) - center[1],
            RHO[..., None] * np.sin(phi_axis) - center[2],
        ]
    )
    spread = np.einsum("i...,ij,j...->...", delta, metric, delta)
    u = np.exp(-spread / (2.0 * grid.width**2)) * (np.hypot(Q, RHO) / Q)[..., None]
    initial_mass = math.exp(offset * jacobian_potential(start, lam)) if grid.include_jacobian else 1.0
    u *= initial_mass / float(np.sum(u * volume))

    logger.debug(
        "grid: %dx%dx%d cells, walls q=%.3g rho=%.3g, dt=%.3g, %d step(s), kappa_max=%.3g",
        n_q,
        n_rho,
        grid.n_phi,
        grid.q_max,
        grid.f_radius,
        dt,
        n_steps,
        kappa_max,
    )

    def mass(values):
        return float(np.sum(values * volume))

    def half_step(values):
        values = _angular_step(values, angular)
        before = mass(values)
        values = values * decay
        return values, before - mass(values)

    scale = 0.5 * lam * dt / (h * h)
    jacobian_loss = 0.0
    for _ in range(n_steps):
        u, lost = half_step(u)
        jacobian_loss += lost
        u = _flux_step(u, w, w_q, w_r, scale)
        u, lost = half_step(u)
        jacobian_loss += lost

    final_mass = mass(u)
    absorbed = (initial_mass - final_mass - jacobian_loss) / initial_mass
    if absorbed > BOUNDARY_MASS_TOL:
        warnings.warn(
            f"grid boundary absorbed {absorbed:.2%} of the mass (tolerance {BOUNDARY_MASS_TOL:.0%})",
            BoundaryMassLoss,
            stacklevel=2,
        )
    logger.info("grid: absorbed fraction %.3g, J loss %.3g", absorbed, jacobian_loss)
    return GridSolution(
        axes=(q_axis, rho_axis, phi_axis),
        u=u,
        dt=dt,
        n_steps=n_steps,
        initial_mass=initial_mass,
        final_mass=final_mass,
        jacobian_loss=jacobian_loss,
        absorbed_fraction=absorbed,
    )


def reduced_kernel_grid(query, grid=None):
    """
    Box average of the reduced kernel G_M from the grid solver.

    Args:
        query: KernelQuery
        grid: GridSpec

    Returns:
        sqrt(H)-weighted average of G_M(x_a, ., t) over query.box
    """
    grid = (grid or GridSpec()).sized_for(query)
    points, _ = query.box.gauss_nodes()
    if not np.all(grid.allows(*points)):
        raise ConfigError("the query box is not inside the grid domain")
    return solve_grid(query, grid).box_average(query.box)
