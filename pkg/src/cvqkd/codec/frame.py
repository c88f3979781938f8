"""Codec configuration and the encoder chain."""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError
from .interleaver import interleave
from .modulation import PSK_ORDER, UNIT_TOL, diff_modulate, map_psk
from .outer import _as_bits, encode_outer


@dataclass(frozen=True)
class CodecConfig:
    """Frame geometry and decoder settings.

    ``k`` information bits become ``M = 3k/2`` code bits, ``S = k/2`` 8-PSK
    symbols and ``R = S + 1`` transmitted symbols.

    ``stop_reliability`` guards early stopping: a distance-2 outer code lets
    paired bit errors satisfy every parity check, so the decoder also waits
    until each code-bit posterior LLR reaches this magnitude. Zero stops on
    parity alone.
    """

    k: int = 4096
    interleaver_seed: int = 0
    psk_order: int = PSK_ORDER
    max_iterations: int = 10
    early_stop: bool = True
    stop_reliability: float = 5.0
    reference_symbol: complex = 1 + 0j

    def __post_init__(self):
        if self.k < 2 or self.k % 2:
            raise InvalidArgumentError(f"frame size k must be even and >= 2, got {self.k}")
        if self.psk_order != PSK_ORDER:
            raise InvalidArgumentError("only 8-PSK is supported (3 code bits per symbol)")
        if self.max_iterations < 1:
            raise InvalidArgumentError("max_iterations must be at least 1")
        if not self.stop_reliability >= 0:
            raise InvalidArgumentError("stop_reliability must be non-negative")
        if not 0 <= self.interleaver_seed < 2**64:
            raise InvalidArgumentError("interleaver seed must be an unsigned 64-bit integer")
        if abs(abs(self.reference_symbol) - 1.0) > UNIT_TOL:
            raise InvalidArgumentError("reference symbol must have unit modulus")

    @property
    def n_code_bits(self) -> int:
        return 3 * self.k // 2

    @property
    def n_symbols(self) -> int:
        return self.k // 2

    @property
    def n_transmitted(self) -> int:
        return self.n_symbols + 1


@dataclass(frozen=True)
class CodedFrame:
    outer_codeword: np.ndarray
    interleaved: np.ndarray
    psk_symbols: np.ndarray
    diff_symbols: np.ndarray


def encode_frame(x, config: CodecConfig) -> CodedFrame:
    """Run the whole encoder chain on one frame of key bits."""
    bits = _as_bits(x)
    if bits.size != config.k:
        raise InvalidArgumentError(f"expected {config.k} key bits, got {bits.size}")
    v = encode_outer(bits)
    vp = interleave(v, config.interleaver_seed)
    w = map_psk(vp)
    xa = diff_modulate(w, config.reference_symbol)
    return CodedFrame(v, vp, w, xa)
