"""Monte Carlo experiment driver and command-line interface."""

from .baseline import uncoded_dpsk_baseline
from .output import HEADER, RowWriter, SweepRow, dumps, emit, load, parse
from .sweep import SweepConfig, run_distance_sweep, run_point, run_snr_sweep, states_for_frames

__all__ = [
    "HEADER",
    "RowWriter",
    "SweepConfig",
    "SweepRow",
    "dumps",
    "emit",
    "load",
    "parse",
    "run_distance_sweep",
    "run_point",
    "run_snr_sweep",
    "states_for_frames",
    "uncoded_dpsk_baseline",
]
