"""Gaussian-channel information rates for Bob and the eavesdropper (bits per channel use)."""

import math
from dataclasses import dataclass

from .channel import effective_snr
from .errors import InvalidArgumentError


@dataclass(frozen=True)
class RatePoint:
    snr: float
    i_ab: float
    i_ae: float

    @property
    def i_s(self) -> float:
        return secret_info(self.i_ab, self.i_ae)


def mutual_info_ab(snr: float) -> float:
    """Shannon rate ``0.5 * log2(1 + snr)``; infinite snr gives infinity."""
    if not snr >= 0:
        raise InvalidArgumentError(f"snr must be non-negative, got {snr}")
    return 0.5 * math.log2(1.0 + snr)


def eve_snr(v_a: float, transmission: float, excess_noise: float) -> float:
    """SNR at Eve's tap of the complementary port ``1 - G``."""
    tap = 1.0 - transmission
    return tap * v_a / (1.0 + tap * excess_noise)


def mutual_info_eve(v_a: float, transmission: float, excess_noise: float, attack: str) -> float:
    """Eve's rate under ``beam_splitter`` or ``entangling_cloner``; zero with no attack."""
    if not v_a > 0:
        raise InvalidArgumentError(f"modulation variance must be positive, got {v_a}")
    if not 0 < transmission <= 1:
        raise InvalidArgumentError(f"transmission must be in (0, 1], got {transmission}")
    if not excess_noise >= 0:
        raise InvalidArgumentError(f"excess noise must be >= 0, got {excess_noise}")
    if attack == "none":
        return 0.0
    if attack == "beam_splitter":
        if excess_noise > 0:
            raise InvalidArgumentError("the beam-splitter attack applies only without excess noise")
    elif attack != "entangling_cloner":
        raise InvalidArgumentError(f"unknown attack {attack!r}")
    return 0.5 * math.log2(1.0 + eve_snr(v_a, transmission, excess_noise))


def secret_info(i_ab: float, i_ae: float) -> float:
    """``i_ab - i_ae``; negative values mark the insecure regime."""
    return i_ab - i_ae


def rate_point(v_a: float, transmission: float, excess_noise: float, attack: str) -> RatePoint:
    snr = effective_snr(v_a, transmission, excess_noise)
    return RatePoint(snr, mutual_info_ab(snr), mutual_info_eve(v_a, transmission, excess_noise, attack))
