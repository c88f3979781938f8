"""Seeded Monte Carlo sweeps over SNR and fibre length."""

import logging
import math
from dataclasses import dataclass, field, replace

from ..channel import attenuation_to_transmission
from ..errors import InvalidArgumentError
from ..protocol import MIN_DISCLOSED, SessionConfig, run_session
from ..seeding import derive_seed
from .baseline import uncoded_dpsk_baseline
from .output import RowWriter, SweepRow

log = logging.getLogger(__name__)

AXES = ("snr_db", "distance_km")
DEFAULT_ALPHA_DB_PER_KM = 0.2
_BASELINE_STREAM = 9


@dataclass(frozen=True)
class SweepConfig:
    """A sweep over one axis.

    Every point runs ``max(frames_per_point, ceil(min_bits_per_point / k))``
    frames. ``noiseless`` replaces the channel noise with an ideal channel,
    ``record_timing=False`` writes zero seconds so output files are
    byte-reproducible.
    """

    axis: str
    points: tuple[float, ...]
    frames_per_point: int = 1
    min_bits_per_point: int = 100_000
    baseline: bool = False
    session: SessionConfig = field(default_factory=SessionConfig)
    output_path: str | None = None
    output_format: str = "csv"
    master_seed: int = 0
    alpha_db_per_km: float = DEFAULT_ALPHA_DB_PER_KM
    noiseless: bool = False
    record_timing: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.axis not in AXES:
            raise InvalidArgumentError(f"unknown sweep axis {self.axis!r}")
        pts = tuple(float(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise InvalidArgumentError("sweep points must be strictly increasing")
        if self.frames_per_point < 1:
            raise InvalidArgumentError("frames_per_point must be at least 1")
        if self.alpha_db_per_km < 0:
            raise InvalidArgumentError("attenuation must be non-negative")
        if self.axis == "distance_km" and pts and pts[0] < 0:
            raise InvalidArgumentError("distances must be non-negative")

    @property
    def frames(self) -> int:
        return max(self.frames_per_point, math.ceil(self.min_bits_per_point / self.session.codec.k))


def states_for_frames(frames: int, k: int, disclosed_fraction: float) -> int:
    """Smallest state count whose retained part fills ``frames`` frames of ``k`` bits."""
    need = frames * k
    n = max(math.ceil(need / (1.0 - disclosed_fraction)), math.ceil(MIN_DISCLOSED / disclosed_fraction) + 1, 100)
    while n - int(round(disclosed_fraction * n)) < need:
        n += 1
    return n


def _point_session(cfg: SweepConfig, index: int, value: float) -> SessionConfig:
    template = cfg.session
    if cfg.axis == "snr_db":
        channel = replace(template.channel, snr=math.inf if cfg.noiseless else 10.0 ** (value / 10.0))
    else:
        g = attenuation_to_transmission(cfg.alpha_db_per_km, value)
        channel = replace(template.channel, transmission=g, snr=math.inf if cfg.noiseless else None)
    return replace(
        template,
        channel=channel,
        n_states=states_for_frames(cfg.frames, template.codec.k, template.disclosed_fraction),
        master_seed=derive_seed(cfg.master_seed, index),
    )


def run_point(cfg: SweepConfig, index: int) -> SweepRow:
    value = cfg.points[index]
    session = _point_session(cfg, index, value)
    report = run_session(session, workers=cfg.workers)
    baseline = None
    if cfg.baseline:
        seed = derive_seed(session.master_seed, 0, _BASELINE_STREAM)
        baseline = uncoded_dpsk_baseline(report.snr, report.bits, seed)
    log.info("%s=%g qber=%.3g iterations=%.2f", cfg.axis, value, report.qber, report.iterations_mean)
    return SweepRow(
        axis_value=value,
        qber=report.qber,
        qber_baseline=baseline,
        i_ab=report.i_ab,
        i_ae=report.i_ae,
        i_s=report.i_s,
        frames=report.frames,
        bits=report.bits,
        mean_iterations=report.iterations_mean,
        seconds=report.wall_time if cfg.record_timing else 0.0,
    )


def _run(cfg: SweepConfig) -> list[SweepRow]:
    writer = RowWriter(cfg.output_path, cfg.output_format) if cfg.output_path else None
    rows = []
    try:
        for i in range(len(cfg.points)):
            rows.append(run_point(cfg, i))
            if writer:
                writer.write(rows[-1])
    finally:
        if writer:
            writer.close()
    return rows


def run_snr_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """One row per SNR point (dB); rows are written as they complete."""
    if cfg.axis != "snr_db":
        raise InvalidArgumentError("run_snr_sweep needs axis='snr_db'")
    return _run(cfg)


def run_distance_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """One row per fibre length (km) at ``G = 10**(-alpha * L / 10)``."""
    if cfg.axis != "distance_km":
        raise InvalidArgumentError("run_distance_sweep needs axis='distance_km'")
    return _run(cfg)
