"""
Utility functions for orbitkernel.
"""

from orbitkernel.utils.ranges import check_keys, parse_points, parse_range
from orbitkernel.utils.sums import batch_means, compensated_mean, compensated_sum

__all__ = [
    "batch_means",
    "check_keys",
    "compensated_mean",
    "compensated_sum",
    "parse_points",
    "parse_range",
]
