"""Uncoded 8-DPSK reference with symbol-by-symbol differential detection."""

import math

import numpy as np

from ..channel import ChannelConfig, transmit
from ..codec.modulation import BITS_PER_SYMBOL, diff_demodulate, diff_modulate, indices_to_bits, map_psk, nearest_index
from ..errors import InvalidArgumentError
from ..seeding import derive_seed, rng_for

MIN_BASELINE_BITS = 1000


def uncoded_dpsk_baseline(snr: float, n_bits: int, seed: int) -> float:
    """Bit-error fraction of uncoded Gray 8-DPSK at linear ``snr`` (``inf`` allowed)."""
    if n_bits < MIN_BASELINE_BITS:
        raise InvalidArgumentError(f"baseline needs at least {MIN_BASELINE_BITS} bits, got {n_bits}")
    n_sym = math.ceil(n_bits / BITS_PER_SYMBOL)
    bits = rng_for(seed).integers(0, 2, n_sym * BITS_PER_SYMBOL).astype(np.uint8)
    x = diff_modulate(map_psk(bits))
    y, _ = transmit(x, ChannelConfig(snr=snr, noise_seed=derive_seed(seed, 0, 1)))
    decided = indices_to_bits(nearest_index(diff_demodulate(y)))
    return float(np.count_nonzero(decided[:n_bits] != bits[:n_bits])) / n_bits
