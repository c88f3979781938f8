"""Command-line entry point.

Subcommands ``session``, ``sweep-snr``, ``sweep-distance`` and ``baseline``.
``--config FILE`` reads flat ``key = value`` lines naming any long flag;
flags on the command line override the file.

Exit codes: 0 success, 2 invalid configuration, 3 I/O error.
"""

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict, replace

from ..channel import ChannelConfig, PhaseModel, attenuation_to_transmission
from ..codec import CodecConfig
from ..errors import InvalidArgumentError
from ..protocol import SessionConfig, run_session
from .baseline import uncoded_dpsk_baseline
from ..seeding import derive_seed
from .output import FORMATS, dumps
from .sweep import DEFAULT_ALPHA_DB_PER_KM, SweepConfig, run_distance_sweep, run_snr_sweep, states_for_frames

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3
_FLAG_SWITCHES = {"baseline", "no-timing", "verbose"}


def parse_points(text: str) -> list[float]:
    """``a,b,c`` or an inclusive range ``start:stop:step``."""
    text = text.strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise argparse.ArgumentTypeError(f"bad range {text!r}, expected start:stop:step")
        start, stop, step = parts
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 10) for i in range(max(n, 0))]
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad point list {text!r}") from None


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat key = value file supplying any flag")
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--k", type=int, default=4096, help="information bits per frame")
    p.add_argument("--frames", type=int, default=1, help="frames per point (raised to meet --min-bits)")
    p.add_argument("--min-bits", type=int, default=100_000)
    p.add_argument("--va", type=float, default=16.0, help="modulation variance in shot-noise units")
    p.add_argument("--zeta", type=float, default=0.0, help="excess noise in shot-noise units")
    p.add_argument("--attack", choices=["none", "beam-splitter", "entangling-cloner"], default="none")
    p.add_argument("--iters", type=int, default=10)
    p.add_argument("--alpha-db-per-km", type=float, default=DEFAULT_ALPHA_DB_PER_KM)
    p.add_argument("--phase-model", default="none", help="none | constant:<rad> | random-walk[:<step>]")
    p.add_argument("--phase-estimation", choices=["genie", "lowpass"], default="genie")
    p.add_argument("--interleaver-seed", type=_u64, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="output path (stdout when omitted)")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument("--no-timing", action="store_true", help="write 0 seconds for reproducible files")
    p.add_argument("--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvqkd", description="Turbo-DPSK reconciliation experiments for CV-QKD.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("session", help="run a single protocol session")
    _common(p)
    p.add_argument("--snr-db", type=parse_points, help="fix the channel SNR (first value used)")
    p.add_argument("--distance-km", type=parse_points, help="fibre length (first value used)")

    for name, axis in (("sweep-snr", "--snr-db"), ("sweep-distance", "--distance-km")):
        p = sub.add_parser(name, help=f"sweep over {axis[2:]}")
        _common(p)
        p.add_argument(axis, type=parse_points, required=True)
        p.add_argument("--baseline", action="store_true", help="also run uncoded DPSK")

    p = sub.add_parser("baseline", help="uncoded 8-DPSK bit error rate")
    _common(p)
    p.add_argument("--snr-db", type=parse_points, required=True)
    return parser


def read_config_file(path: str) -> list[str]:
    """Turn ``key = value`` lines into command-line tokens."""
    tokens = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise InvalidArgumentError(f"{path}:{lineno}: expected key = value")
            key = key.strip().replace("_", "-")
            value = value.strip()
            if key in _FLAG_SWITCHES:
                if value.lower() in ("1", "true", "yes", "on"):
                    tokens.append(f"--{key}")
            else:
                tokens += [f"--{key}", value]
    return tokens


def _expand_config(argv: list[str]) -> list[str]:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path, rest = argv[i + 1], argv[:i] + argv[i + 2 :]
        elif tok.startswith("--config="):
            path, rest = tok.split("=", 1)[1], argv[:i] + argv[i + 1 :]
        else:
            continue
        # file tokens go right after the subcommand so explicit flags win
        return rest[:1] + read_config_file(path) + rest[1:]
    return argv


def _session_template(args) -> SessionConfig:
    codec = CodecConfig(k=args.k, interleaver_seed=args.interleaver_seed, max_iterations=args.iters)
    channel = ChannelConfig(
        excess_noise=args.zeta,
        phase_model=PhaseModel.parse(args.phase_model),
        attack=args.attack.replace("-", "_"),
    )
    return SessionConfig(
        v_a=args.va,
        codec=codec,
        channel=channel,
        master_seed=args.seed,
        phase_estimation=args.phase_estimation,
    )


def _sweep_config(args, axis: str, points) -> SweepConfig:
    return SweepConfig(
        axis=axis,
        points=tuple(points),
        frames_per_point=args.frames,
        min_bits_per_point=args.min_bits,
        baseline=args.baseline,
        session=_session_template(args),
        output_path=args.out,
        output_format=args.format,
        master_seed=args.seed,
        alpha_db_per_km=args.alpha_db_per_km,
        record_timing=not args.no_timing,
        workers=args.workers,
    )


def _print_rows(rows, fmt):
    sys.stdout.write(dumps(rows, fmt))


def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write output file {path}: {exc.strerror}") from exc


def _run(args) -> int:
    if args.command == "session":
        template = _session_template(args)
        channel = template.channel
        if args.distance_km:
            channel = replace(channel, transmission=attenuation_to_transmission(args.alpha_db_per_km, args.distance_km[0]))
        if args.snr_db:
            channel = replace(channel, snr=10.0 ** (args.snr_db[0] / 10.0))
        frames = max(args.frames, math.ceil(args.min_bits / args.k))
        cfg = replace(
            template,
            channel=channel,
            n_states=states_for_frames(frames, args.k, template.disclosed_fraction),
        )
        report = asdict(run_session(cfg, workers=args.workers))
        if args.no_timing:
            report["wall_time"] = report["decode_seconds"] = 0.0
        _write_text(args.out, json.dumps(report, indent=2) + "\n")
        return EXIT_OK

    if args.command == "baseline":
        n_bits = max(args.min_bits, args.frames * args.k)
        lines = ["snr_db,qber\n"]
        for i, db in enumerate(args.snr_db):
            q = uncoded_dpsk_baseline(10.0 ** (db / 10.0), n_bits, derive_seed(args.seed, i))
            lines.append(f"{db:.10g},{q:.10g}\n")
        _write_text(args.out, "".join(lines))
        return EXIT_OK

    if args.command == "sweep-snr":
        cfg = _sweep_config(args, "snr_db", args.snr_db)
        rows = run_snr_sweep(cfg)
    else:
        cfg = _sweep_config(args, "distance_km", args.distance_km)
        rows = run_distance_sweep(cfg)
    if args.out is None:
        _print_rows(rows, args.format)
    return EXIT_OK


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _expand_config(argv)
    except OSError as exc:
        print(f"error: cannot read config file: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _run(args)
    except (InvalidArgumentError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
