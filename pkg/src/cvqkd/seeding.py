"""splitmix64 helpers.

Every random stream in the package is derived from a 64-bit seed through
these functions so results never depend on worker scheduling.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Sequential splitmix64 generator over unsigned 64-bit integers."""

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return _mix(self.state)


def splitmix64(x: int) -> int:
    """First output of a splitmix64 generator seeded with ``x``."""
    return SplitMix64(x).next()


def derive_seed(seed: int, index: int, stream: int = 0) -> int:
    """Sub-seed for item ``index`` of a named ``stream``.

    ``stream = 0`` reduces to the ``splitmix64(seed XOR index)`` contract used
    for sweep points.
    """
    return splitmix64((int(seed) ^ int(index) ^ (int(stream) << 48)) & MASK64)


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng([int(seed) & MASK64, int(stream)])
