"""
Batch runner for the path simulators.

Paths are cut into batches of params.batch_size and each path draws its
noise through PathNoise by its own index. Batches run on a thread pool;
neither the pool size nor the batch size changes the output, since
results are reassembled in path order.
"""

import csv
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from orbitkernel.const import SAMPLE_CSV_COLUMNS, THREADS_ENV
from orbitkernel.errors import ConfigError
from orbitkernel.modules.geometry.bundle import killing_norm_arrays
from orbitkernel.modules.geometry.points import as_base
from orbitkernel.modules.sde.noise import PathNoise
from orbitkernel.modules.sde.steps import (
    PathState,
    accumulate_weights,
    step_adapted,
    step_original,
    step_reduced,
    step_transformed,
)
from orbitkernel.utils.sums import batch_means

logger = logging.getLogger(__name__)

# process tag -> (state kind, noise dimension)
PROCESS_KINDS = {
    "original": ("original", 4),
    "adapted": ("adapted", 4),
    "transformed": ("adapted", 4),
    "xi": ("reduced", 3),
    "xi_tilde": ("reduced", 3),
}

# processes whose noise includes the base noises w~^1, w~^2 needed by the filtering factor
FILTERED_KINDS = ("transformed", "xi", "xi_tilde")


def resolve_threads(threads=None):
    """
    Worker count: explicit value, else ORBITKERNEL_THREADS, else 1.
    """
    if threads is None:
        threads = os.environ.get(THREADS_ENV, "1")
    try:
        threads = int(threads)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {threads!r}") from exc
    if threads < 1:
        raise ConfigError(f"thread count must be at least 1, got {threads}")
    return threads


@dataclass(frozen=True)
class SampleSet:
    """
    Endpoints and weights of a simulated batch.

    Attributes:
        kind: Process tag
        n: Fourier index of the filtering factor
        time: Horizon reached
        endpoints: Base coordinates (3, n_paths)
        angles: Group angles (n_paths,) or None for reduced processes
        weight_log: Feynman-Kac log-weights
        phase: Filtering factors
        discarded: True for paths absorbed at the axis guard
    """

    kind: str
    n: int
    time: float
    endpoints: np.ndarray
    angles: object
    weight_log: np.ndarray
    phase: np.ndarray
    discarded: np.ndarray

    @property
    def n_paths(self):
        return self.endpoints.shape[1]

    @property
    def discards(self):
        return int(np.count_nonzero(self.discarded))

    @property
    def discard_fraction(self):
        return self.discards / self.n_paths

    @property
    def weights(self):
        """exp(weight_log), zero for discarded paths."""
        return np.where(self.discarded, 0.0, np.exp(self.weight_log))

    def moment(self, values, n_groups):
        """
        Batch-means estimate of E[values] over the kept paths.
        """
        kept = np.asarray(values)[~self.discarded]
        return batch_means(kept, n_groups)


def _batches(n_paths, batch_size):
    count = math.ceil(n_paths / batch_size)
    return [(index * batch_size, min(batch_size, n_paths - index * batch_size)) for index in range(count)]


def _run_batch(kind, n, params, start, first, size, include_jacobian, on_axis):
    state_kind, dim = PROCESS_KINDS[kind]
    state = PathState.start(state_kind, start, size)
    for dw in PathNoise(params.seed, first, size).normals(params.n_steps, dim):
        prev = state.base_arrays()
        if kind == "original":
            state = step_original(state, dw, params, on_axis)
        elif kind == "adapted":
            state = step_adapted(state, dw, params, on_axis)
        elif kind == "transformed":
            state = step_transformed(state, dw, params, on_axis)
        else:
            state = step_reduced(state, dw, params, kind, on_axis)
        dw_used = dw[1:3] if kind in FILTERED_KINDS else None
        state = accumulate_weights(state, prev, state.base_arrays(), n, params, dw_used, include_jacobian)
    return state


def simulate_batch(kind, n, params, start, t=None, include_jacobian=True, threads=None, on_axis="discard"):
    """
    Simulate params.n_paths independent trajectories of one process.

    Args:
        kind: "original", "adapted", "transformed", "xi" or "xi_tilde"
        n: Fourier index of the filtering factor (0 for none)
        params: SimParams
        start: Starting point (EuclideanPoint, AdaptedPoint or BasePoint)
        t: Horizon; params.t_total when omitted
        include_jacobian: Keep J in the Feynman-Kac exponent
        threads: Worker count; ORBITKERNEL_THREADS when omitted
        on_axis: "discard" or "raise"

    Returns:
        SampleSet; identical for identical (seed, params) on any thread count and batch size

    Raises:
        ConfigError: On an unknown process or an n the process cannot carry
    """
    if kind not in PROCESS_KINDS:
        raise ConfigError(f"unknown process {kind!r}, expected one of {sorted(PROCESS_KINDS)}")
    if n != 0 and kind not in FILTERED_KINDS:
        raise ConfigError(f"process {kind!r} carries no filtering factor; use n = 0")
    params = params.for_horizon(params.t_total if t is None else t)
    batches = _batches(int(params.n_paths), int(params.batch_size))
    workers = min(resolve_threads(threads), len(batches))
    logger.debug(
        "%s: %d path(s) in %d batch(es), %d step(s) of %.3g on %d thread(s)",
        kind,
        params.n_paths,
        len(batches),
        params.n_steps,
        params.dt,
        workers,
    )

    def run(batch):
        first, size = batch
        return _run_batch(kind, n, params, start, first, size, include_jacobian, on_axis)

    if workers == 1:
        states = [run(batch) for batch in batches]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            states = list(pool.map(run, batches))

    angles = [state.angles() for state in states]
    samples = SampleSet(
        kind=kind,
        n=n,
        time=params.t_total,
        endpoints=np.hstack([state.base_arrays() for state in states]),
        angles=None if angles[0] is None else np.concatenate(angles),
        weight_log=np.concatenate([state.weight_log for state in states]),
        phase=np.concatenate([state.phase for state in states]),
        discarded=~np.concatenate([state.alive for state in states]),
    )
    if samples.discards:
        logger.info("%s: %d of %d path(s) absorbed at the axis guard", kind, samples.discards, samples.n_paths)
    return samples


def write_samples_csv(samples, stream):
    """
    Write one row per endpoint to an open text stream.

    Columns: time, q_star, ft1, ft2, weight_log, phase_re, phase_im, discarded.
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SAMPLE_CSV_COLUMNS)
    time = format(samples.time, ".17g")
    for i in range(samples.n_paths):
        q_star, ft1, ft2 = samples.endpoints[:, i]
        phase = samples.phase[i]
        writer.writerow(
            [
                time,
                *(format(value, ".17g") for value in (q_star, ft1, ft2, samples.weight_log[i], phase.real, phase.imag)),
                int(samples.discarded[i]),
            ]
        )


@dataclass(frozen=True)
class PhaseDecay:
    """
    Filtering factor on frozen coefficients against its closed form.

    Attributes:
        mean_re, mean_re_stderr: Batch-means estimate of E[Re phase]
        expected_mean: exp(-lambda n^2 T / (2 Q*^2))
        mean_abs2: Average |phase|^2
        expected_abs2: exp(-lambda n^2 T / d)
    """

    mean_re: float
    mean_re_stderr: float
    expected_mean: float
    mean_abs2: float
    expected_abs2: float


def frozen_phase_decay(x, n, params, n_groups=50):
    """
    Accumulate the filtering factor with the base point held fixed at x.

    The noise term has variance lambda n^2 dt rho^2/(d Q*^2) per step, so
    E[phase] decays at lambda n^2/(2 Q*^2) while |phase|^2 decays
    deterministically at lambda n^2/d.

    Args:
        x: Base point
        n: Fourier index
        params: SimParams (n_paths, seed, dt, t_total are used)
        n_groups: Batch-means groups

    Returns:
        PhaseDecay
    """
    base = as_base(x)
    size = int(params.n_paths)
    state = PathState.start("reduced", base, size)
    frozen = state.base_arrays()
    for dw in PathNoise(params.seed, 0, size).normals(params.n_steps, 2):
        state = accumulate_weights(state, frozen, frozen, n, params, dw, include_jacobian=False)

    t = params.n_steps * params.dt
    lam = params.mu2kappa
    mean_re, stderr = batch_means(state.phase.real, n_groups)
    return PhaseDecay(
        mean_re=mean_re,
        mean_re_stderr=stderr,
        expected_mean=math.exp(-lam * n * n * t / (2.0 * base.q_star**2)),
        mean_abs2=float(np.mean(np.abs(state.phase) ** 2)),
        expected_abs2=math.exp(-lam * n * n * t / float(killing_norm_arrays(*base.as_array()))),
    )
