"""Gray-labelled 8-PSK mapping and the differential (inner) modulator."""

import numpy as np

from ..errors import InvalidArgumentError

PSK_ORDER = 8
BITS_PER_SYMBOL = 3
UNIT_TOL = 1e-9

# Constellation index m sits at exp(2j*pi*m/8) and carries label m ^ (m >> 1).
GRAY_LABELS = np.array([m ^ (m >> 1) for m in range(PSK_ORDER)], dtype=np.int64)
INDEX_OF_LABEL = np.argsort(GRAY_LABELS)
# LABEL_BITS[m, j] is bit j (MSB first) of the label of point m.
LABEL_BITS = np.array(
    [[(g >> (BITS_PER_SYMBOL - 1 - j)) & 1 for j in range(BITS_PER_SYMBOL)] for g in GRAY_LABELS],
    dtype=np.uint8,
)
CONSTELLATION = np.exp(2j * np.pi * np.arange(PSK_ORDER) / PSK_ORDER)


def bits_to_indices(bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.int64)
    if bits.ndim != 1 or bits.size % BITS_PER_SYMBOL:
        raise InvalidArgumentError("8-PSK mapping needs a bit count divisible by 3")
    labels = bits.reshape(-1, BITS_PER_SYMBOL) @ np.array([4, 2, 1])
    return INDEX_OF_LABEL[labels]


def indices_to_bits(indices) -> np.ndarray:
    return LABEL_BITS[np.asarray(indices, dtype=np.int64) % PSK_ORDER].ravel()


def map_psk(bits) -> np.ndarray:
    """Map 3-bit groups to unit-modulus 8-PSK symbols (``000 -> 1+0j``)."""
    return CONSTELLATION[bits_to_indices(bits)]


def nearest_index(symbols) -> np.ndarray:
    """Hard 8-PSK decision by phase sector."""
    angles = np.angle(np.asarray(symbols))
    return np.rint(angles / (2 * np.pi / PSK_ORDER)).astype(np.int64) % PSK_ORDER


def _check_unit(symbols, what):
    if np.any(np.abs(np.abs(symbols) - 1.0) > UNIT_TOL):
        raise InvalidArgumentError(f"{what} must have unit modulus")


def diff_modulate(w, reference_symbol: complex = 1 + 0j) -> np.ndarray:
    """Differential encoding ``X[0] = ref``, ``X[i] = W[i-1] * X[i-1]``.

    Phases are accumulated on integer constellation indices where possible so
    long frames do not drift off the unit circle.
    """
    w = np.asarray(w, dtype=complex)
    _check_unit(w, "PSK symbols")
    _check_unit(np.array([reference_symbol]), "reference symbol")
    idx = nearest_index(w)
    if np.allclose(CONSTELLATION[idx], w, rtol=0, atol=1e-12):
        states = np.concatenate([[0], np.cumsum(idx) % PSK_ORDER])
        return reference_symbol * CONSTELLATION[states]
    out = np.empty(w.size + 1, dtype=complex)
    out[0] = reference_symbol
    out[1:] = reference_symbol * np.cumprod(w)
    return out


def diff_demodulate(x) -> np.ndarray:
    """Recover ``W[i] = X[i+1] * conj(X[i])``."""
    x = np.asarray(x, dtype=complex)
    return x[1:] * np.conj(x[:-1])
