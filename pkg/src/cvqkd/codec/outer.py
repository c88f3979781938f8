"""Single-parity-check [3, 2, 2] outer code and its soft-in/soft-out decoder."""

import numpy as np

from ..errors import InvalidArgumentError

LLR_CLAMP = 30.0


def _as_bits(x) -> np.ndarray:
    bits = np.asarray(x)
    if bits.ndim != 1:
        raise InvalidArgumentError("bit sequence must be one-dimensional")
    if bits.size and not np.all((bits == 0) | (bits == 1)):
        raise InvalidArgumentError("bit sequence may only contain 0 and 1")
    return bits.astype(np.uint8)


def encode_outer(x) -> np.ndarray:
    """Encode bit pairs ``(b0, b1)`` as ``(b0, b1, b0 ^ b1)``.

    Raises:
        InvalidArgumentError: if ``x`` has odd length.
    """
    bits = _as_bits(x)
    if bits.size % 2:
        raise InvalidArgumentError(f"outer encoder needs an even number of bits, got {bits.size}")
    pairs = bits.reshape(-1, 2)
    return np.column_stack([pairs, pairs[:, 0] ^ pairs[:, 1]]).ravel()


def boxplus(a, b):
    """Soft XOR of two LLRs, exact (Jacobian) form."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return (
        np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
        + np.log1p(np.exp(-np.abs(a + b)))
        - np.log1p(np.exp(-np.abs(a - b)))
    )


def decode_outer_siso(channel_llrs):
    """Soft-in/soft-out decoding of consecutive parity triplets.

    Args:
        channel_llrs: LLRs of the code bits (positive favours 0), length a
            multiple of 3. Values are clamped to +/-30 first.

    Returns:
        ``(extrinsic, hard)``: the extrinsic LLR of each bit, i.e. the box-plus
        of the other two bits of its triplet, and the hard decisions on
        ``channel + extrinsic`` (ties resolve to 0).
    """
    llrs = np.asarray(channel_llrs, dtype=float)
    if llrs.ndim != 1 or llrs.size % 3:
        raise InvalidArgumentError("outer SISO input length must be a multiple of 3")
    t = np.clip(llrs, -LLR_CLAMP, LLR_CLAMP).reshape(-1, 3)
    ext = np.column_stack(
        [boxplus(t[:, 1], t[:, 2]), boxplus(t[:, 0], t[:, 2]), boxplus(t[:, 0], t[:, 1])]
    )
    ext = np.clip(ext, -LLR_CLAMP, LLR_CLAMP)
    hard = ((t + ext) < 0).astype(np.uint8).ravel()
    return ext.ravel(), hard


def parity_violations(code_bits) -> int:
    """Number of triplets whose parity check fails."""
    t = np.asarray(code_bits, dtype=np.uint8).reshape(-1, 3)
    return int(np.count_nonzero(t[:, 0] ^ t[:, 1] ^ t[:, 2]))


def information_bits(code_bits) -> np.ndarray:
    return np.asarray(code_bits, dtype=np.uint8).reshape(-1, 3)[:, :2].ravel()
