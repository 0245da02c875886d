"""
Counter-based normal streams for the path simulators.

Each stream is a Philox generator whose key is derived from
(seed, stream index) through a SeedSequence, so distinct indices are
statistically independent and a given pair always replays the same
sequence regardless of which thread draws it.

Path i reads column i % NOISE_BLOCK of stream i // NOISE_BLOCK, so its
draws depend on (seed, i) only and not on how paths are batched.
"""

from dataclasses import dataclass

import numpy as np

from orbitkernel.const import NOISE_BLOCK


@dataclass(frozen=True)
class NoiseStream:
    """
    Attributes:
        seed: 64-bit unsigned run seed
        index: Stream index (one per block of NOISE_BLOCK paths)
    """

    seed: int
    index: int

    def generator(self):
        sequence = np.random.SeedSequence([int(self.seed), int(self.index)])
        return np.random.Generator(np.random.Philox(sequence))

    def normals(self, n_steps, dim, size):
        """
        Yield n_steps arrays of shape (dim, size) of standard normals.
        """
        rng = self.generator()
        for _ in range(n_steps):
            yield rng.standard_normal((dim, size))


@dataclass(frozen=True)
class PathNoise:
    """
    Normals for the paths first, ..., first + size - 1 of a run.

    Attributes:
        seed: 64-bit unsigned run seed
        first: Index of the first path
        size: Number of paths
        block: Paths per stream
    """

    seed: int
    first: int
    size: int
    block: int = NOISE_BLOCK

    def normals(self, n_steps, dim):
        """
        Yield n_steps arrays of shape (dim, size); whole blocks are drawn and sliced.
        """
        first_block = self.first // self.block
        last_block = (self.first + self.size - 1) // self.block
        offset = self.first - first_block * self.block
        streams = [
            NoiseStream(self.seed, index).normals(n_steps, dim, self.block)
            for index in range(first_block, last_block + 1)
        ]
        for draws in zip(*streams):
            yield np.concatenate(draws, axis=1)[:, offset : offset + self.size]
