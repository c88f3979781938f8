"""Seeded bit interleaver.

The permutation is a Durstenfeld shuffle driven by splitmix64: for
``i = n-1 .. 1`` draw ``j = next() mod (i+1)`` and swap ``perm[i]`` with
``perm[j]``. Output position ``t`` carries input position ``perm[t]``.
"""

from functools import lru_cache

import numpy as np

from ..errors import InvalidArgumentError
from ..seeding import SplitMix64


@lru_cache(maxsize=32)
def _cached_permutation(n: int, seed: int) -> np.ndarray:
    perm = list(range(n))
    gen = SplitMix64(seed)
    for i in range(n - 1, 0, -1):
        j = gen.next() % (i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    out = np.array(perm, dtype=np.int64)
    out.flags.writeable = False
    return out


def permutation(n: int, seed: int) -> np.ndarray:
    """Return the length-``n`` interleaver permutation for ``seed``."""
    if n < 1:
        raise InvalidArgumentError("interleaver length must be positive")
    return _cached_permutation(int(n), int(seed))


def interleave(v, seed: int) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim != 1 or v.size == 0:
        raise InvalidArgumentError("interleave expects a non-empty 1-D sequence")
    return v[permutation(v.size, seed)]


def deinterleave(v, seed: int) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim != 1 or v.size == 0:
        raise InvalidArgumentError("deinterleave expects a non-empty 1-D sequence")
    out = np.empty_like(v)
    out[permutation(v.size, seed)] = v
    return out
