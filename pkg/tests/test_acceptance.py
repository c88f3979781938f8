"""Exit criteria for the build. Each test records one PASS/FAIL line."""

import math
import time

import numpy as np
import pytest
from scipy import optimize

from cvqkd.channel import ChannelConfig, apply_attack, noise_variance, transmit
from cvqkd.codec import (
    LLR_CLAMP,
    ChannelEstimate,
    CodecConfig,
    decode_outer_siso,
    demod_app,
    diff_modulate,
    encode_frame,
    map_psk,
    reconcile,
)
from cvqkd.harness import SweepConfig, run_distance_sweep, run_snr_sweep, uncoded_dpsk_baseline
from cvqkd.infotheory import mutual_info_ab, rate_point
from cvqkd.protocol import SNR_CAP, SessionConfig, compute_qber
from cvqkd.seeding import derive_seed
from oracles import brute_force_app, brute_force_spc

TARGET_QBER = 1e-2


def _binomial_sigma(q, n):
    return math.sqrt(max(q * (1 - q), 1.0 / n) / n)


def _crossing_db(points, qbers, target=TARGET_QBER):
    """SNR where the curve first falls through ``target``, log-linear interpolation."""
    for (x0, q0), (x1, q1) in zip(zip(points, qbers), zip(points[1:], qbers[1:])):
        if q0 >= target > q1 and q1 > 0:
            f = (math.log10(q0) - math.log10(target)) / (math.log10(q0) - math.log10(q1))
            return x0 + f * (x1 - x0)
    raise AssertionError(f"curve never crosses {target}: {qbers}")


def test_01_inner_decoder_matches_enumeration(criterion):
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for n_sym in range(2, 7):
        for _ in range(3 if n_sym < 6 else 2):
            sigma2 = rng.uniform(0.15, 1.0)
            x = diff_modulate(map_psk(rng.integers(0, 2, 3 * n_sym)))
            y = x + math.sqrt(sigma2) * (rng.standard_normal(x.size) + 1j * rng.standard_normal(x.size))
            prior = rng.normal(0, 2, 3 * n_sym)
            got = demod_app(y, sigma2, prior)
            ref = np.clip(brute_force_app(y, sigma2, prior), -LLR_CLAMP, LLR_CLAMP)
            worst = max(worst, float(np.max(np.abs(got - ref))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 60
    criterion("1. inner APP vs enumeration", ok, f"max dev {worst:.2e} (<= 1e-9), {elapsed:.1f}s (< 60s)")
    assert ok


def test_02_outer_decoder_matches_enumeration(criterion):
    llrs = np.random.default_rng(99).normal(0, 6, (10_000, 3))
    llrs = np.clip(llrs, -LLR_CLAMP, LLR_CLAMP)
    ext, _ = decode_outer_siso(llrs.ravel())
    ref = np.array([brute_force_spc(t) for t in llrs]).ravel()
    worst = float(np.max(np.abs(ext - ref)))
    criterion("2. outer SISO vs 4-codeword marginalization", worst <= 1e-12, f"max dev {worst:.2e} on 10^4 triplets (<= 1e-12)")
    assert worst <= 1e-12


def test_03_noiseless_identity(criterion):
    worst = 0.0
    for i in range(100):
        cfg = CodecConfig(k=1024, interleaver_seed=derive_seed(3, i))
        bits = np.random.default_rng(i).integers(0, 2, 1024)
        y, _ = transmit(encode_frame(bits, cfg).diff_symbols, ChannelConfig(snr=math.inf))
        result = reconcile(y, cfg, ChannelEstimate(noise_variance(SNR_CAP)))
        worst = max(worst, compute_qber(bits, result.bits))
    criterion("3. noiseless end-to-end identity", worst == 0, f"max QBER over 100 frames of k=1024 = {worst}")
    assert worst == 0


@pytest.mark.slow
def test_04_coding_gain(criterion):
    start = time.perf_counter()
    session = SessionConfig(codec=CodecConfig(k=4096, interleaver_seed=2024))
    coded_pts = tuple(np.arange(6.0, 10.01, 0.5))
    rows = run_snr_sweep(SweepConfig(axis="snr_db", points=coded_pts, session=session, master_seed=404))
    assert all(r.bits >= 100_000 for r in rows)
    coded_db = _crossing_db(coded_pts, [r.qber for r in rows])

    base_pts = tuple(np.arange(12.0, 18.01, 0.5))
    base_q = [uncoded_dpsk_baseline(10 ** (db / 10), 300_000, derive_seed(404, i)) for i, db in enumerate(base_pts)]
    base_db = _crossing_db(base_pts, base_q)
    gain = base_db - coded_db
    elapsed = time.perf_counter() - start
    ok = 1.0 <= gain <= 3.0 and elapsed <= 600
    criterion(
        "4. coding gain at QBER 1e-2",
        ok,
        f"coded {coded_db:.2f} dB, uncoded DPSK {base_db:.2f} dB, gain {gain:.2f} dB (window [1, 3]), {elapsed:.0f}s",
    )
    assert elapsed <= 600
    assert 1.0 <= gain <= 3.0, f"gain {gain:.2f} dB outside the 2 +/- 1 dB window"


def _monotone_violations(qbers, bits, increasing):
    bad = []
    for i in range(len(qbers) - 1):
        q0, q1 = qbers[i], qbers[i + 1]
        tol = 2 * math.hypot(_binomial_sigma(q0, bits[i]), _binomial_sigma(q1, bits[i + 1]))
        step = (q0 - q1) if increasing else (q1 - q0)
        if step > tol:
            bad.append(i)
    return bad


@pytest.mark.slow
def test_05_monotonicity(criterion):
    session = SessionConfig(codec=CodecConfig(k=4096, interleaver_seed=2024))
    snr_rows = run_snr_sweep(
        SweepConfig(axis="snr_db", points=tuple(np.arange(0.0, 6.01, 0.5)), session=session, master_seed=505)
    )
    dist_rows = run_distance_sweep(
        SweepConfig(axis="distance_km", points=tuple(range(0, 41, 5)), session=session, master_seed=505)
    )
    assert all(r.bits >= 100_000 for r in snr_rows + dist_rows)
    snr_bad = _monotone_violations([r.qber for r in snr_rows], [r.bits for r in snr_rows], increasing=False)
    dist_bad = _monotone_violations([r.qber for r in dist_rows], [r.bits for r in dist_rows], increasing=True)
    beyond_25 = max(r.qber for r in dist_rows if r.axis_value > 25)
    ok = not snr_bad and not dist_bad
    criterion(
        "5. monotone QBER in SNR and distance",
        ok,
        f"SNR 0-6 dB: {snr_rows[0].qber:.3g} -> {snr_rows[-1].qber:.3g}, "
        f"distance 0-40 km: {dist_rows[0].qber:.3g} -> {dist_rows[-1].qber:.3g}, "
        f"2-sigma violations {len(snr_bad)}/{len(dist_bad)}",
    )
    assert ok
    assert beyond_25 > 0.05


def test_06_information_rates(criterion):
    a, b = mutual_info_ab(1.0), mutual_info_ab(3.0)
    root = optimize.brentq(lambda g: rate_point(5.0, g, 0.0, "beam_splitter").i_s, 0.01, 0.99, xtol=1e-15)
    ok = abs(a - 0.5) <= 1e-12 and abs(b - 1.0) <= 1e-12 and abs(root - 0.5) <= 1e-9
    criterion("6. information rates", ok, f"I_AB(1)={a!r}, I_AB(3)={b!r}, I_s sign change at G={root:.12f}")
    assert ok


def test_07_linear_decode_time(criterion):
    medians = {}
    snr = 10 ** 0.8
    for k in (2048, 4096, 8192):
        cfg = CodecConfig(k=k, interleaver_seed=7, early_stop=False)
        est = ChannelEstimate(noise_variance(snr))
        reconcile(encode_frame(np.zeros(k, np.uint8), cfg).diff_symbols, cfg, est)  # warm caches
        times = []
        for i in range(20):
            bits = np.random.default_rng(i).integers(0, 2, k)
            y, _ = transmit(encode_frame(bits, cfg).diff_symbols, ChannelConfig(snr=snr, noise_seed=i))
            t0 = time.perf_counter()
            reconcile(y, cfg, est)
            times.append(time.perf_counter() - t0)
        medians[k] = float(np.median(times))
    r1, r2 = medians[4096] / medians[2048], medians[8192] / medians[4096]
    ok = 1.5 <= r1 <= 2.5 and 1.5 <= r2 <= 2.5
    criterion(
        "7. linear decode complexity",
        ok,
        f"median s/frame {', '.join(f'{k}: {v:.3f}' for k, v in medians.items())}; ratios {r1:.2f}, {r2:.2f} (in [1.5, 2.5])",
    )
    assert ok


def test_08_determinism(criterion, tmp_path):
    def sweep(path, workers):
        cfg = SweepConfig(
            axis="snr_db",
            points=(3.0, 6.0, 9.0),
            min_bits_per_point=8192,
            baseline=True,
            session=SessionConfig(codec=CodecConfig(k=512, interleaver_seed=8)),
            output_path=str(path),
            master_seed=808,
            record_timing=False,
            workers=workers,
        )
        run_snr_sweep(cfg)
        return path.read_bytes()

    first = sweep(tmp_path / "a.csv", 1)
    second = sweep(tmp_path / "b.csv", 1)
    parallel = sweep(tmp_path / "c.csv", 3)
    ok = first == second == parallel
    criterion("8. byte-identical output", ok, f"two serial runs and a 3-worker run agree: {ok} ({len(first)} bytes)")
    assert ok


def test_09_channel_statistics(criterion):
    n = 10**6
    snr = 2.0
    x = np.ones(n, complex)
    y, _ = transmit(x, ChannelConfig(snr=snr, noise_seed=909))
    sigma2 = noise_variance(snr)
    se = sigma2 * math.sqrt(2.0 / (n - 1))
    devs = [abs(np.var(q, ddof=1) - sigma2) / se for q in ((y - x).real, (y - x).imag)]

    symbols = diff_modulate(map_psk(np.random.default_rng(1).integers(0, 2, 3000)))
    amplitudes = np.abs(symbols).copy()
    same = True
    for attack, zeta in (("beam_splitter", 0.0), ("entangling_cloner", 0.2)):
        plain = ChannelConfig(transmission=0.7, excess_noise=zeta, snr=4.0, noise_seed=1)
        attacked = apply_attack(ChannelConfig(transmission=0.7, excess_noise=zeta, snr=4.0, noise_seed=1, attack=attack))
        same &= np.array_equal(transmit(symbols, plain)[0], transmit(symbols, attacked)[0])
        same &= np.array_equal(np.abs(symbols), amplitudes)
    ok = max(devs) <= 3 and same
    criterion(
        "9. channel statistics",
        ok,
        f"variance deviation {devs[0]:.2f}/{devs[1]:.2f} standard errors (<= 3); attacks leave symbols identical: {same}",
    )
    assert ok
