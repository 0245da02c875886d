"""
Stochastic processes of the bundle and their path weights.

Provides:
- SimParams and the invariant potential family
- Counter-based noise streams
- Euler-Maruyama steps of the flat, adapted, transformed and reduced processes
- Feynman-Kac and filtering weights
- The batch runner and CSV sample output
"""

from orbitkernel.modules.sde.batch import (
    PhaseDecay,
    SampleSet,
    frozen_phase_decay,
    resolve_threads,
    simulate_batch,
    write_samples_csv,
)
from orbitkernel.modules.sde.noise import NoiseStream, PathNoise
from orbitkernel.modules.sde.params import InvariantPotential, SimParams
from orbitkernel.modules.sde.steps import (
    PathState,
    accumulate_weights,
    step_adapted,
    step_original,
    step_reduced,
    step_transformed,
)

__all__ = [
    # Parameters
    "InvariantPotential",
    "SimParams",
    # Noise
    "NoiseStream",
    "PathNoise",
    # Steps
    "PathState",
    "accumulate_weights",
    "step_adapted",
    "step_original",
    "step_reduced",
    "step_transformed",
    # Batches
    "PhaseDecay",
    "SampleSet",
    "frozen_phase_decay",
    "resolve_threads",
    "simulate_batch",
    "write_samples_csv",
]
