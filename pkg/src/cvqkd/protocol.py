"""CV-QKD session: state preparation, measurement, sifting, estimation, reconciliation."""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import ChannelConfig, apply_attack, gaussian_channel, noise_variance, transmit
from .codec import ChannelEstimate, CodecConfig, LowPassPhaseTracker, encode_frame, reconcile
from .errors import InsufficientDataError, InvalidArgumentError
from .infotheory import mutual_info_ab, mutual_info_eve, secret_info
from .seeding import derive_seed, rng_for

log = logging.getLogger(__name__)

BASIS_X, BASIS_P = 0, 1
BASIS_NAMES = ("X", "P")
SNR_CAP = 1e6
MIN_DISCLOSED = 30

# sub-seed streams of a session seed
_PREPARE, _MEASURE, _DISCLOSE, _FRAME = 1, 2, 3, 4
_KEY, _NOISE = 1, 2


@dataclass(frozen=True)
class CoherentStateFrame:
    x_values: np.ndarray
    p_values: np.ndarray
    v_a: float

    def __len__(self):
        return self.x_values.size


@dataclass(frozen=True)
class Sifted:
    indices: np.ndarray
    bases: np.ndarray
    alice_values: np.ndarray


@dataclass(frozen=True)
class SnrEstimate:
    snr: float
    disclosed: np.ndarray
    retained: np.ndarray


def prepare_states(n: int, v_a: float, seed: int) -> CoherentStateFrame:
    """Draw ``n`` coherent states with both quadratures ~ N(0, V_A) (shot noise = 1)."""
    if n < 1:
        raise InvalidArgumentError("need at least one state")
    if not v_a > 0:
        raise InvalidArgumentError(f"modulation variance must be positive, got {v_a}")
    draws = rng_for(seed).normal(0.0, math.sqrt(v_a), (2, n))
    return CoherentStateFrame(draws[0], draws[1], float(v_a))


def measure_quadratures(frame: CoherentStateFrame, seed: int, channel: ChannelConfig | None = None):
    """Bob picks X or P at random for each state and measures it through the channel.

    Values are in Bob's rescaled units, ``x + N(0, V_A / snr)``; without a
    channel the measurement is noiseless.

    Returns:
        ``(values, bases)`` with bases coded as ``BASIS_X`` / ``BASIS_P``.
    """
    if len(frame) == 0:
        raise InvalidArgumentError("empty frame")
    rng = rng_for(seed)
    bases = rng.integers(0, 2, len(frame)).astype(np.uint8)
    sent = np.where(bases == BASIS_X, frame.x_values, frame.p_values)
    snr = math.inf if channel is None else channel.resolved_snr(frame.v_a)
    return gaussian_channel(sent, snr, frame.v_a, rng), bases


def sift(frame: CoherentStateFrame, bob_bases) -> Sifted:
    """Keep Alice's value in Bob's announced quadrature; every state survives."""
    bob_bases = np.asarray(bob_bases, dtype=np.uint8)
    if bob_bases.shape != (len(frame),):
        raise InvalidArgumentError("basis list length does not match the frame")
    values = np.where(bob_bases == BASIS_X, frame.x_values, frame.p_values)
    return Sifted(np.arange(bob_bases.size), bob_bases.copy(), values)


def estimate_snr(alice_values, bob_values, disclosed_fraction: float, seed: int, cap: float = SNR_CAP) -> SnrEstimate:
    """Estimate the SNR on a randomly disclosed subset.

    ``snr = Var(alice) / Var(bob - alice)`` with unbiased variances, capped at
    ``cap`` (a noiseless channel would otherwise diverge). Disclosed indices
    are returned separately so they can be kept out of the key.
    """
    a = np.asarray(alice_values, dtype=float)
    b = np.asarray(bob_values, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidArgumentError("alice and bob sequences must have equal length")
    if not 0 < disclosed_fraction < 1:
        raise InvalidArgumentError("disclosed fraction must lie strictly between 0 and 1")
    if a.size < 100:
        raise InsufficientDataError(f"need at least 100 samples for estimation, got {a.size}")
    n_disc = int(round(disclosed_fraction * a.size))
    if n_disc < MIN_DISCLOSED:
        raise InsufficientDataError(f"disclosed subset of {n_disc} samples is below {MIN_DISCLOSED}")
    order = rng_for(seed).permutation(a.size)
    disclosed = np.sort(order[:n_disc])
    retained = np.sort(order[n_disc:])
    noise = np.var(b[disclosed] - a[disclosed], ddof=1)
    signal = np.var(a[disclosed], ddof=1)
    snr = cap if noise == 0 else min(signal / noise, cap)
    return SnrEstimate(float(snr), disclosed, retained)


def compute_qber(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise InvalidArgumentError("QBER needs two non-empty bit strings of equal length")
    return float(np.count_nonzero(a != b)) / a.size


@dataclass(frozen=True)
class SessionConfig:
    """One protocol run.

    ``phase_estimation`` selects how the receiver learns the carrier phase:
    ``genie`` hands it the true phase track, ``lowpass`` runs the
    moving-average tracker inside the decoding loop.
    """

    n_states: int = 110_000
    v_a: float = 16.0
    codec: CodecConfig = field(default_factory=CodecConfig)
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    disclosed_fraction: float = 0.1
    master_seed: int = 0
    phase_estimation: str = "genie"
    tracker_window: int = 33

    def __post_init__(self):
        if not 0 < self.disclosed_fraction < 1:
            raise InvalidArgumentError("disclosed fraction must lie strictly between 0 and 1")
        if not self.v_a > 0:
            raise InvalidArgumentError("modulation variance must be positive")
        if self.n_states < 1:
            raise InvalidArgumentError("n_states must be positive")
        if self.phase_estimation not in ("genie", "lowpass"):
            raise InvalidArgumentError(f"unknown phase estimation {self.phase_estimation!r}")
        if not 0 <= self.master_seed < 2**64:
            raise InvalidArgumentError("master seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class SessionReport:
    qber: float
    snr: float
    snr_estimate: float
    i_ab: float
    i_ae: float
    i_s: float
    iterations_mean: float
    wall_time: float
    decode_seconds: float
    frames: int
    bits: int
    errors: int
    failed_frames: int = 0


@dataclass(frozen=True)
class _FrameJob:
    seed: int
    codec: CodecConfig
    channel: ChannelConfig
    v_a: float
    noise_variance: float
    phase_estimation: str
    tracker_window: int


@dataclass(frozen=True)
class _FrameResult:
    errors: int
    iterations: int
    seconds: float
    failed: bool = False


def _run_frame(job: _FrameJob) -> _FrameResult:
    try:
        bits = rng_for(job.seed, _KEY).integers(0, 2, job.codec.k).astype(np.uint8)
        coded = encode_frame(bits, job.codec)
        channel = replace(job.channel, noise_seed=derive_seed(job.seed, 0, _NOISE))
        y, true_phase = transmit(coded.diff_symbols, channel, job.v_a)
        if job.phase_estimation == "genie":
            estimate = ChannelEstimate(job.noise_variance, phase=true_phase)
        else:
            estimate = ChannelEstimate(job.noise_variance, tracker=LowPassPhaseTracker(job.tracker_window))
        start = time.perf_counter()
        result = reconcile(y, job.codec, estimate)
        elapsed = time.perf_counter() - start
    except Exception:  # one broken frame must not abort a sweep
        log.exception("frame with seed %d failed", job.seed)
        return _FrameResult(0, 0, 0.0, failed=True)
    return _FrameResult(int(np.count_nonzero(result.bits != bits)), result.iterations, elapsed)


def run_session(cfg: SessionConfig, workers: int = 1) -> SessionReport:
    """Run prepare, measure, sift, estimate, reconcile and rate computation.

    Key frames are carried over the equivalent DPSK channel at the true SNR
    while the decoder only uses the estimated noise variance. Each frame draws
    from its own sub-seed, so the report does not depend on ``workers``.
    """
    start = time.perf_counter()
    seed = cfg.master_seed
    channel = apply_attack(cfg.channel)
    snr = channel.resolved_snr(cfg.v_a)

    frame = prepare_states(cfg.n_states, cfg.v_a, derive_seed(seed, 0, _PREPARE))
    bob_values, bases = measure_quadratures(frame, derive_seed(seed, 0, _MEASURE), channel)
    sifted = sift(frame, bases)
    est = estimate_snr(sifted.alice_values, bob_values, cfg.disclosed_fraction, derive_seed(seed, 0, _DISCLOSE))

    n_frames = est.retained.size // cfg.codec.k
    if n_frames < 1:
        raise InvalidArgumentError(
            f"{est.retained.size} retained states cannot fill one frame of {cfg.codec.k} bits"
        )
    jobs = [
        _FrameJob(
            derive_seed(seed, i, _FRAME),
            cfg.codec,
            channel,
            cfg.v_a,
            noise_variance(est.snr),
            cfg.phase_estimation,
            cfg.tracker_window,
        )
        for i in range(n_frames)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_frame, jobs))
    else:
        results = [_run_frame(job) for job in jobs]

    good = [r for r in results if not r.failed]
    bits = len(good) * cfg.codec.k
    errors = sum(r.errors for r in good)
    i_ab = mutual_info_ab(est.snr)
    i_ae = mutual_info_eve(cfg.v_a, channel.transmission, channel.excess_noise, channel.attack)
    return SessionReport(
        qber=errors / bits if bits else float("nan"),
        snr=snr,
        snr_estimate=est.snr,
        i_ab=i_ab,
        i_ae=i_ae,
        i_s=secret_info(i_ab, i_ae),
        iterations_mean=float(np.mean([r.iterations for r in good])) if good else 0.0,
        wall_time=time.perf_counter() - start,
        decode_seconds=sum(r.seconds for r in good),
        frames=len(good),
        bits=bits,
        errors=errors,
        failed_frames=len(results) - len(good),
    )
