"""Gaussian quantum channel seen through Bob's rescaled equivalent model.

Bob's raw quadrature is ``sqrt(G) x + n`` with ``Var(n) = 1 + G*zeta`` in
shot-noise units. Dividing by ``sqrt(G)`` gives ``X_B = X_A + eps`` with
``snr = G * V_A / (1 + G*zeta)``, which is the form the codec consumes.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidArgumentError
from .seeding import rng_for

ATTACKS = ("none", "beam_splitter", "entangling_cloner")
PHASE_KINDS = ("none", "constant", "random_walk")
DEFAULT_WALK_STEP = 0.01


@dataclass(frozen=True)
class PhaseModel:
    """Carrier phase disturbance: ``none``, ``constant`` (radians) or ``random_walk`` (step std)."""

    kind: str = "none"
    value: float = 0.0

    def __post_init__(self):
        if self.kind not in PHASE_KINDS:
            raise InvalidArgumentError(f"unknown phase model {self.kind!r}")
        if self.kind == "random_walk" and self.value < 0:
            raise InvalidArgumentError("random-walk step must be non-negative")

    @classmethod
    def parse(cls, text: str) -> "PhaseModel":
        """Parse ``none``, ``constant:<rad>`` or ``random-walk[:<step>]``."""
        name, _, arg = text.strip().partition(":")
        name = name.replace("-", "_")
        if name == "none":
            return cls()
        if name == "random_walk":
            return cls(name, float(arg) if arg else DEFAULT_WALK_STEP)
        if name == "constant" and arg:
            return cls(name, float(arg))
        raise InvalidArgumentError(f"cannot parse phase model {text!r}")

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "none":
            return np.zeros(n)
        if self.kind == "constant":
            return np.full(n, float(self.value))
        steps = rng.normal(0.0, self.value, n)
        steps[0] = 0.0
        return np.cumsum(steps)


@dataclass(frozen=True)
class ChannelConfig:
    """Channel parameters.

    ``snr`` is linear. When it is ``None`` the SNR follows from
    ``effective_snr(V_A, G, zeta)``; ``math.inf`` means a noiseless channel.
    """

    transmission: float = 1.0
    excess_noise: float = 0.0
    snr: float | None = None
    phase_model: PhaseModel = PhaseModel()
    attack: str = "none"
    noise_seed: int = 0
    # filled in by apply_attack
    eve_transmission: float | None = None
    eve_epr_variance: float | None = None

    def __post_init__(self):
        if not 0 < self.transmission <= 1:
            raise InvalidArgumentError(f"transmission G must be in (0, 1], got {self.transmission}")
        if not self.excess_noise >= 0:
            raise InvalidArgumentError(f"excess noise must be >= 0, got {self.excess_noise}")
        if self.snr is not None and not self.snr > 0:
            raise InvalidArgumentError(f"snr must be positive, got {self.snr}")
        if self.attack not in ATTACKS:
            raise InvalidArgumentError(f"unknown attack {self.attack!r}")
        if self.attack == "beam_splitter" and self.excess_noise > 0:
            raise InvalidArgumentError("the beam-splitter attack applies only without excess noise")
        if not 0 <= self.noise_seed < 2**64:
            raise InvalidArgumentError("noise seed must be an unsigned 64-bit integer")

    def resolved_snr(self, v_a: float | None = None) -> float:
        if self.snr is not None:
            return self.snr
        if v_a is None:
            raise InvalidArgumentError("snr is not fixed; the modulation variance V_A is needed")
        return effective_snr(v_a, self.transmission, self.excess_noise)


def effective_snr(v_a: float, transmission: float, excess_noise: float) -> float:
    """``G * V_A / (1 + G * zeta)`` in shot-noise units."""
    if not v_a > 0:
        raise InvalidArgumentError(f"modulation variance must be positive, got {v_a}")
    if not 0 < transmission <= 1:
        raise InvalidArgumentError(f"transmission G must be in (0, 1], got {transmission}")
    if not excess_noise >= 0:
        raise InvalidArgumentError(f"excess noise must be >= 0, got {excess_noise}")
    return transmission * v_a / (1.0 + transmission * excess_noise)


def noise_variance(snr: float) -> float:
    """Per-quadrature variance for unit-energy symbols."""
    return 0.0 if math.isinf(snr) else 1.0 / (2.0 * snr)


def attenuation_to_transmission(alpha_db_per_km: float, length_km: float) -> float:
    if alpha_db_per_km < 0 or length_km < 0:
        raise InvalidArgumentError("attenuation and length must be non-negative")
    return 10.0 ** (-alpha_db_per_km * length_km / 10.0)


def apply_attack(cfg: ChannelConfig) -> ChannelConfig:
    """Record the eavesdropper's parameters for the configured attack.

    The attack only changes SNR bookkeeping, never the transmitted symbols.
    For the entangling cloner Eve's EPR variance ``W`` satisfies
    ``(1 - G) * W = 1 - G + G * zeta``.
    """
    if cfg.attack == "none":
        return cfg
    g = cfg.transmission
    if cfg.attack == "beam_splitter":
        if cfg.excess_noise > 0:
            raise InvalidArgumentError("the beam-splitter attack applies only without excess noise")
        return replace(cfg, eve_transmission=1.0 - g, eve_epr_variance=1.0)
    w = math.inf if g == 1 else 1.0 + g * cfg.excess_noise / (1.0 - g)
    return replace(cfg, eve_transmission=1.0 - g, eve_epr_variance=w)


def transmit(x_a, cfg: ChannelConfig, v_a: float | None = None):
    """Send unit-modulus symbols through the channel.

    Returns:
        ``(x_b, true_phase)`` with ``x_b[i] = x_a[i] * exp(1j*phi[i]) + eps[i]``
        and complex Gaussian ``eps`` of per-quadrature variance ``1/(2 snr)``.
    """
    x_a = np.asarray(x_a, dtype=complex)
    if np.any(np.abs(np.abs(x_a) - 1.0) > 1e-9):
        raise InvalidArgumentError("transmitted symbols must have unit modulus")
    sigma = math.sqrt(noise_variance(cfg.resolved_snr(v_a)))
    rng = rng_for(cfg.noise_seed)
    phase = cfg.phase_model.sample(x_a.size, rng)
    noise = rng.standard_normal((2, x_a.size))
    rotated = x_a * np.exp(1j * phase) if cfg.phase_model.kind != "none" else x_a.copy()
    if sigma == 0.0:
        return rotated, phase
    return rotated + sigma * (noise[0] + 1j * noise[1]), phase


def gaussian_channel(values, snr: float, v_a: float, rng: np.random.Generator) -> np.ndarray:
    """Real-valued equivalent channel for quadrature samples: ``x + N(0, V_A/snr)``."""
    values = np.asarray(values, dtype=float)
    noise = rng.standard_normal(values.size)
    if math.isinf(snr):
        return values.copy()
    return values + math.sqrt(v_a / snr) * noise
