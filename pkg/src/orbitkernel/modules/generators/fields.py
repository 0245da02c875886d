"""
Scalar test fields on the orbit space and the finite-difference scheme.

Fields are functions of the base coordinates (Q*, f~1, f~2) returning a
real or complex value. The factories below cover the families used by the
operator checks: constants, affine and quadratic monomials, and Gaussian
bumps, which exercise first- and second-order coefficients separately.
"""

from dataclasses import dataclass

import numpy as np

from orbitkernel.const import FD_STEP, FD_STEP_MAX, FD_STEP_MIN
from orbitkernel.errors import ConfigError


@dataclass(frozen=True)
class ScalarField:
    """
    A deterministic, side-effect-free C^2 function on the orbit space.

    Attributes:
        func: Callable (q_star, ft1, ft2) -> value; must accept numpy arrays
        name: Label used in check reports
        gradient: Optional callable (q_star, ft1, ft2) -> (d_q, d_f1, d_f2) in closed form
    """

    func: object
    name: str = "field"
    gradient: object = None

    def __call__(self, q_star, ft1, ft2):
        return self.func(q_star, ft1, ft2)

    def at(self, x):
        """Evaluate at a BasePoint or AdaptedPoint."""
        return self.func(x.q_star, x.ft1, x.ft2)


@dataclass(frozen=True)
class FDScheme:
    """
    Second-order central differences with a fixed step.
    """

    step: float = FD_STEP

    def __post_init__(self):
        if not FD_STEP_MIN <= self.step <= FD_STEP_MAX:
            raise ConfigError(f"fd step must lie in [{FD_STEP_MIN}, {FD_STEP_MAX}], got {self.step}")

    @property
    def order(self):
        return 2


def constant(value=1.0):
    return ScalarField(lambda q, f1, f2: value + 0.0 * q, name=f"constant({value})")


def coordinate(index):
    """The coordinate function x^index, index 0 for Q*, 1 and 2 for f~."""
    names = ("q_star", "ft1", "ft2")
    return ScalarField(lambda q, f1, f2: (q, f1, f2)[index], name=names[index])


def affine(c0, cq, c1, c2):
    return ScalarField(
        lambda q, f1, f2: c0 + cq * q + c1 * f1 + c2 * f2,
        name=f"affine({c0},{cq},{c1},{c2})",
    )


def monomial(pq, p1, p2):
    """q_star**pq * ft1**p1 * ft2**p2."""
    return ScalarField(lambda q, f1, f2: q**pq * f1**p1 * f2**p2, name=f"monomial({pq},{p1},{p2})")


def quadratic_sum():
    """q_star^2 + ft1^2."""
    return ScalarField(lambda q, f1, f2: q * q + f1 * f1, name="q_star^2+ft1^2")


def gaussian_bump(center, width):
    """exp(-|x - center|^2 / (2 width^2)) in base coordinates."""
    cq, c1, c2 = (float(c) for c in center)
    scale = 2.0 * width * width

    def bump(q, f1, f2):
        return np.exp(-((q - cq) ** 2 + (f1 - c1) ** 2 + (f2 - c2) ** 2) / scale)

    return ScalarField(bump, name=f"gaussian({cq},{c1},{c2};{width})")


def log_killing_norm():
    """sigma = ln(Q*^2 + f~1^2 + f~2^2), with its gradient 2 (Q*, f~1, f~2) / d."""

    def gradient(q, f1, f2):
        scale = 2.0 / (q * q + f1 * f1 + f2 * f2)
        return (scale * q, scale * f1, scale * f2)

    return ScalarField(lambda q, f1, f2: np.log(q * q + f1 * f1 + f2 * f2), name="sigma", gradient=gradient)


def standard_family(center=(1.5, 0.3, -0.2), width=0.8):
    """
    The five fields used by the equivariance check.
    """
    return [
        constant(1.0),
        affine(0.5, 1.0, -0.7, 0.4),
        quadratic_sum(),
        monomial(1, 1, 1),
        gaussian_bump(center, width),
    ]
