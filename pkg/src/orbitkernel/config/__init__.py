"""
Configuration module for orbitkernel.

Provides the run configuration: simulation parameters, the kernel query,
the finite-difference and grid settings, sweep ranges and check options.
"""

from orbitkernel.config.base import DEFAULT_CONFIG, RunConfig, get_config

__all__ = ["DEFAULT_CONFIG", "RunConfig", "get_config"]
