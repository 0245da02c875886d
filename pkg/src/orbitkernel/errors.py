"""
Exception hierarchy for orbitkernel.
"""


class OrbitKernelError(Exception):
    """Base class for every error raised by orbitkernel."""


class DegeneratePoint(OrbitKernelError, ValueError):
    """A point lies within the radius guard around the axis Q = 0."""


class AxisHit(OrbitKernelError):
    """
    One or more paths entered the excluded neighbourhood of the axis.

    Attributes:
        count: Number of paths that crossed the guard radius in the step
    """

    def __init__(self, count, message=None):
        self.count = int(count)
        super().__init__(message or f"{self.count} path(s) entered the axis guard")


class ConfigError(OrbitKernelError, ValueError):
    """Invalid parameters or configuration document."""


class QuadratureNotConverged(OrbitKernelError):
    """Doubling the orbit quadrature changed the result beyond tolerance."""


class InsufficientSamples(OrbitKernelError):
    """Too few weighted endpoints landed in the target box."""


class StabilityViolation(OrbitKernelError):
    """The explicit grid time step exceeds its stability bound."""


class BoundaryMassLoss(UserWarning):
    """The grid solver absorbed more mass on its truncation boundary than allowed."""
