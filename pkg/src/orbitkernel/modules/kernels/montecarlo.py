"""
Monte Carlo estimate of the reduced kernel averaged over a box.
"""

import logging
from dataclasses import dataclass

import numpy as np

from orbitkernel.const import MIN_BOX_HITS, MIN_GROUPS, N_GROUPS
from orbitkernel.errors import ConfigError, InsufficientSamples
from orbitkernel.modules.sde.batch import simulate_batch
from orbitkernel.utils.sums import batch_means, compensated_mean

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MCEstimate:
    """
    Attributes:
        estimate: Box average of the kernel w.r.t. the Riemannian volume
        stderr: Batch-means standard error
        hits: Kept endpoints inside the box
        n_paths: Trajectories simulated
        discards: Trajectories absorbed at the axis guard
        total_mass: Mean path weight over all trajectories
    """

    estimate: float
    stderr: float
    hits: int
    n_paths: int
    discards: int
    total_mass: float


def reduced_kernel_mc(query, include_jacobian=True, process="xi_tilde", n_groups=N_GROUPS, threads=None):
    """
    Weighted fraction of endpoints in the box per unit Riemannian box volume.

    estimate = sum_{endpoints in box} exp(weight_log) / (n_paths * int_box sqrt(H))

    Args:
        query: KernelQuery
        include_jacobian: Keep J in the path weight
        process: "xi_tilde" for G_M; "xi" with include_jacobian=False gives
            the density of the projected flat process instead
        n_groups: Batch-means groups, at least MIN_GROUPS
        threads: Worker count

    Returns:
        MCEstimate

    Raises:
        InsufficientSamples: If fewer than MIN_BOX_HITS endpoints land in the box
    """
    if n_groups < MIN_GROUPS:
        raise ConfigError(f"need at least {MIN_GROUPS} batch-means groups, got {n_groups}")
    if process not in ("xi", "xi_tilde"):
        raise ConfigError(f"process must be xi or xi_tilde, got {process!r}")
    samples = simulate_batch(process, 0, query.params, query.start, query.t, include_jacobian, threads)
    inside = query.box.contains(samples.endpoints) & ~samples.discarded
    hits = int(np.count_nonzero(inside))
    if hits < MIN_BOX_HITS:
        raise InsufficientSamples(f"only {hits} endpoint(s) in the box, need {MIN_BOX_HITS}")

    weights = samples.weights
    volume = query.box.riemannian_volume()
    estimate, stderr = batch_means(np.where(inside, weights, 0.0) / volume, n_groups)
    logger.info(
        "mc: %d hit(s) of %d path(s), estimate %.6g +- %.2g",
        hits,
        samples.n_paths,
        estimate,
        stderr,
    )
    return MCEstimate(
        estimate=estimate,
        stderr=stderr,
        hits=hits,
        n_paths=samples.n_paths,
        discards=samples.discards,
        total_mass=compensated_mean(weights),
    )
