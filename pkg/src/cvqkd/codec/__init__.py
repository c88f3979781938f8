"""Serial turbo encoder/modulator and iterative demodulator/decoder."""

from .decoder import ChannelEstimate, DecodeResult, reconcile
from .frame import CodecConfig, CodedFrame, encode_frame
from .interleaver import deinterleave, interleave, permutation
from .modulation import CONSTELLATION, diff_demodulate, diff_modulate, indices_to_bits, map_psk, nearest_index
from .outer import LLR_CLAMP, boxplus, decode_outer_siso, encode_outer, parity_violations
from .phase import LowPassPhaseTracker
from .trellis import app_messages, demod_app, soft_symbols

__all__ = [
    "CONSTELLATION",
    "LLR_CLAMP",
    "ChannelEstimate",
    "CodecConfig",
    "CodedFrame",
    "DecodeResult",
    "LowPassPhaseTracker",
    "app_messages",
    "boxplus",
    "decode_outer_siso",
    "deinterleave",
    "demod_app",
    "diff_demodulate",
    "diff_modulate",
    "encode_frame",
    "encode_outer",
    "indices_to_bits",
    "interleave",
    "map_psk",
    "nearest_index",
    "parity_violations",
    "permutation",
    "reconcile",
    "soft_symbols",
]
