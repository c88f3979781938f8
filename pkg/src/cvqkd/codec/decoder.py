"""Iterative demodulation and decoding."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidArgumentError
from .frame import CodecConfig
from .interleaver import deinterleave, interleave
from .outer import decode_outer_siso, information_bits, parity_violations
from .phase import LowPassPhaseTracker
from .trellis import app_messages, soft_symbols


@dataclass(frozen=True)
class ChannelEstimate:
    """What the receiver knows about the channel.

    Attributes:
        noise_variance: Per-quadrature noise variance used in the branch metrics.
        phase: Known phase track (one value per received sample), or ``None``.
        tracker: Optional phase estimator. When set it replaces ``phase`` and
            is re-run on every iteration from the current soft symbols.
    """

    noise_variance: float
    phase: np.ndarray | None = None
    tracker: LowPassPhaseTracker | None = None

    def __post_init__(self):
        if not self.noise_variance > 0:
            raise InvalidArgumentError("noise variance must be positive")


@dataclass
class DecodeResult:
    bits: np.ndarray
    iterations: int
    converged: bool
    parity_trace: list[int] = field(default_factory=list)

    def __iter__(self):
        # unpacks as (bits, iterations, converged)
        return iter((self.bits, self.iterations, self.converged))


def reconcile(y, config: CodecConfig, channel_estimate: ChannelEstimate) -> DecodeResult:
    """Estimate Alice's key bits from the received samples.

    Alternates the APP demodulator and the parity-check SISO, exchanging
    extrinsic information through the interleaver, for up to
    ``config.max_iterations`` rounds. With ``early_stop`` the loop ends once
    every parity triplet is satisfied and every code-bit posterior is at least
    ``config.stop_reliability`` in magnitude; ``converged`` reports whether that
    condition held on exit.
    """
    y = np.asarray(y, dtype=complex)
    if y.shape != (config.n_transmitted,):
        raise InvalidArgumentError(f"expected {config.n_transmitted} received samples, got {y.size}")
    ref = config.reference_symbol
    tracker = channel_estimate.tracker
    if tracker is not None:
        phase = tracker.initial(y, ref)
    elif channel_estimate.phase is not None:
        phase = np.asarray(channel_estimate.phase, dtype=float)
    else:
        phase = np.zeros(y.size)

    prior = np.zeros(config.n_code_bits)
    trace = []
    for it in range(1, config.max_iterations + 1):
        ext, post = app_messages(y, channel_estimate.noise_variance, prior, phase, ref)
        channel_llrs = deinterleave(ext, config.interleaver_seed)
        ext_outer, hard = decode_outer_siso(channel_llrs)
        trace.append(parity_violations(hard))
        reliable = np.min(np.abs(channel_llrs + ext_outer)) >= config.stop_reliability
        done = trace[-1] == 0 and reliable
        if config.early_stop and done:
            break
        prior = interleave(ext_outer, config.interleaver_seed)
        if tracker is not None:
            phase = tracker.refine(y, soft_symbols(post, ref))
    return DecodeResult(information_bits(hard), it, bool(done), trace)
