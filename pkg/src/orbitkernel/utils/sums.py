"""
Order-independent accumulation of per-batch results.
"""

import math

import numpy as np


def compensated_sum(values):
    """
    Correctly rounded sum of a real or complex array.

    The result does not depend on the order of the values, so batch
    results can be merged in any order.
    """
    values = np.asarray(values).ravel()
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real), math.fsum(values.imag))
    return math.fsum(values)


def compensated_mean(values):
    values = np.asarray(values).ravel()
    if values.size == 0:
        return float("nan")
    return compensated_sum(values) / values.size


def batch_means(values, n_groups):
    """
    Mean and batch-means standard error over contiguous groups.

    Args:
        values: 1-D array of per-path contributions
        n_groups: Number of contiguous groups (at most len(values))

    Returns:
        Tuple (mean, stderr); stderr is nan with fewer than two groups
    """
    values = np.asarray(values, dtype=float).ravel()
    n_groups = min(int(n_groups), values.size)
    if n_groups < 2:
        return compensated_mean(values), float("nan")
    groups = np.array_split(values, n_groups)
    means = np.array([compensated_mean(group) for group in groups])
    sizes = np.array([group.size for group in groups], dtype=float)
    mean = compensated_sum(means * sizes) / sizes.sum()
    stderr = float(np.std(means, ddof=1) / np.sqrt(n_groups))
    return mean, stderr
