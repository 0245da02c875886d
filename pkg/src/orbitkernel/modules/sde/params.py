"""
Simulation parameters and the group-invariant potential family.
"""

import math
from dataclasses import dataclass, field, replace

from orbitkernel.const import BATCH_SIZE, DT, EPS_MIN
from orbitkernel.errors import ConfigError


@dataclass(frozen=True)
class InvariantPotential:
    """
    V = c1 * Q*^2 + c2 * (f~1^2 + f~2^2).

    Both terms are functions of SO(2)-invariants, so V is automatically
    invariant when written in adapted coordinates.
    """

    c1: float = 0.0
    c2: float = 0.0

    def __call__(self, q_star, ft1, ft2):
        return self.c1 * q_star * q_star + self.c2 * (ft1 * ft1 + ft2 * ft2)

    @property
    def is_zero(self):
        return self.c1 == 0.0 and self.c2 == 0.0

    def to_dict(self):
        return {"c1": self.c1, "c2": self.c2}


@dataclass(frozen=True)
class SimParams:
    """
    Parameters of one batch of path simulations.

    Attributes:
        mu2kappa: Diffusion scale lambda = mu^2 kappa
        mass_m: Particle mass m in the potential term V/(lambda m)
        dt: Euler-Maruyama step
        t_total: Horizon
        eps_min: Axis guard radius; paths crossing it are absorbed
        seed: 64-bit unsigned seed of the noise streams
        n_paths: Number of trajectories
        potential: InvariantPotential (zero by default)
        batch_size: Paths per worker task
    """

    mu2kappa: float = 1.0
    mass_m: float = 1.0
    dt: float = DT
    t_total: float = 0.5
    eps_min: float = EPS_MIN
    seed: int = 0
    n_paths: int = 10_000
    potential: InvariantPotential = field(default_factory=InvariantPotential)
    batch_size: int = BATCH_SIZE

    def __post_init__(self):
        if not self.mu2kappa > 0.0:
            raise ConfigError(f"mu2kappa must be positive, got {self.mu2kappa}")
        if not self.mass_m > 0.0:
            raise ConfigError(f"mass_m must be positive, got {self.mass_m}")
        if not self.dt > 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if not self.t_total > 0.0 or self.dt > self.t_total:
            raise ConfigError(f"need 0 < dt <= t_total, got dt={self.dt}, t_total={self.t_total}")
        if not self.eps_min > 0.0:
            raise ConfigError(f"eps_min must be positive, got {self.eps_min}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if int(self.n_paths) < 1:
            raise ConfigError(f"n_paths must be at least 1, got {self.n_paths}")
        if int(self.batch_size) < 1:
            raise ConfigError(f"batch_size must be at least 1, got {self.batch_size}")
        if not isinstance(self.potential, InvariantPotential):
            raise ConfigError("potential must be an InvariantPotential")

    @property
    def lam(self):
        return self.mu2kappa

    @property
    def n_steps(self):
        return max(1, round(self.t_total / self.dt))

    def for_horizon(self, t):
        """
        Copy with horizon t and the step adjusted so that t is a whole number of steps.

        Args:
            t: Horizon, positive

        Returns:
            SimParams
        """
        if not t > 0.0:
            raise ConfigError(f"horizon must be positive, got {t}")
        n_steps = max(1, round(t / self.dt))
        return replace(self, t_total=t, dt=t / n_steps)

    def to_dict(self):
        return {
            "mu2kappa": self.mu2kappa,
            "mass_m": self.mass_m,
            "dt": self.dt,
            "t_total": self.t_total,
            "eps_min": self.eps_min,
            "seed": int(self.seed),
            "n_paths": int(self.n_paths),
            "potential": self.potential.to_dict(),
            "batch_size": int(self.batch_size),
        }

    @classmethod
    def from_dict(cls, values):
        values = dict(values)
        potential = values.pop("potential", None) or {}
        if isinstance(potential, str):
            if potential != "zero":
                raise ConfigError(f"unknown potential {potential!r}")
            potential = {}
        try:
            return cls(potential=InvariantPotential(**potential), **values)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


def noise_scale(params):
    """sqrt(lambda * dt), the common factor of every Wiener increment."""
    return math.sqrt(params.mu2kappa * params.dt)
