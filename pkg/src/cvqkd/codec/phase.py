"""Low-pass carrier phase estimation for the iterative receiver.

The first pass removes the modulation with the 8th-power law, the later
passes are decision directed on the soft symbols produced by the APP
demodulator. Both smooth with a centred moving average.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError
from .modulation import PSK_ORDER


def _moving_average(z: np.ndarray, window: int) -> np.ndarray:
    if window <= 1:
        return z
    kernel = np.ones(window) / window
    return np.convolve(z, kernel, mode="same")


def _unwrap_sectors(phi: np.ndarray, period: float) -> np.ndarray:
    return np.unwrap(phi * (2 * np.pi / period)) * (period / (2 * np.pi))


@dataclass(frozen=True)
class LowPassPhaseTracker:
    """Moving-average phase estimator.

    Attributes:
        window: Length of the moving-average filter in symbols. Longer windows
            average more noise but follow fast drift less closely.
    """

    window: int = 33

    def __post_init__(self):
        if self.window < 1:
            raise InvalidArgumentError("filter window must be at least 1")

    def initial(self, y, reference_symbol=1 + 0j) -> np.ndarray:
        """Blind estimate from the received samples alone.

        The 8-fold ambiguity of the power law is resolved with the known
        reference symbol at index 0.
        """
        y = np.asarray(y, dtype=complex)
        z = _moving_average((y / np.maximum(np.abs(y), 1e-300)) ** PSK_ORDER, self.window)
        sector = 2 * np.pi / PSK_ORDER
        phi = _unwrap_sectors(np.angle(z) / PSK_ORDER, sector)
        observed = np.angle(y[0] * np.conj(reference_symbol))
        shift = np.rint((observed - phi[0]) / sector) * sector
        return phi + shift

    def refine(self, y, soft_symbols) -> np.ndarray:
        """Decision-directed estimate given posterior-mean symbols."""
        y = np.asarray(y, dtype=complex)
        z = _moving_average(y * np.conj(np.asarray(soft_symbols)), self.window)
        return np.unwrap(np.angle(z))
