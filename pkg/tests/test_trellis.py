import numpy as np
import pytest

from cvqkd.codec import LLR_CLAMP, demod_app, diff_modulate, map_psk
from cvqkd.errors import InvalidArgumentError
from oracles import brute_force_app


def _frame(rng, n_sym, sigma2, ref=1 + 0j):
    bits = rng.integers(0, 2, 3 * n_sym)
    x = diff_modulate(map_psk(bits), ref)
    noise = np.sqrt(sigma2) * (rng.standard_normal(x.size) + 1j * rng.standard_normal(x.size))
    return bits, x + noise


@pytest.mark.parametrize("n_sym", [2, 3, 4, 5])
def test_matches_enumeration(n_sym):
    rng = np.random.default_rng(n_sym)
    for _ in range(3):
        sigma2 = rng.uniform(0.2, 1.0)
        _, y = _frame(rng, n_sym, sigma2)
        prior = rng.normal(0, 2, 3 * n_sym)
        phase = rng.normal(0, 0.2, y.size)
        got = demod_app(y, sigma2, prior, phase)
        ref = np.clip(brute_force_app(y, sigma2, prior, phase), -LLR_CLAMP, LLR_CLAMP)
        assert np.max(np.abs(got - ref)) <= 1e-9


def test_noiseless_limit_recovers_bits():
    rng = np.random.default_rng(3)
    bits, _ = _frame(rng, 200, 0.0)
    x = diff_modulate(map_psk(bits))
    llr = demod_app(x, 1e-9)
    assert np.array_equal((llr < 0).astype(int), bits)


@pytest.mark.parametrize("m", range(8))
def test_rotation_symmetry(m):
    rng = np.random.default_rng(11)
    _, y = _frame(rng, 50, 0.3)
    prior = rng.normal(0, 1, 150)
    rot = np.exp(1j * np.pi / 4 * m)
    base = demod_app(y, 0.3, prior)
    turned = demod_app(y * rot, 0.3, prior, reference_symbol=rot)
    assert np.max(np.abs(base - turned)) <= 1e-9


def test_extrinsic_excludes_own_prior():
    rng = np.random.default_rng(5)
    _, y = _frame(rng, 40, 0.4)
    prior = rng.normal(0, 1.5, 120)
    base = demod_app(y, 0.4, prior)
    for idx in (0, 37, 119):
        bumped = prior.copy()
        bumped[idx] += 2.5
        assert abs(demod_app(y, 0.4, bumped)[idx] - base[idx]) <= 1e-9


def test_outputs_are_clamped_and_finite():
    rng = np.random.default_rng(9)
    bits, y = _frame(rng, 100, 1e-4)
    llr = demod_app(y, 1e-4)
    assert np.all(np.isfinite(llr))
    assert np.max(np.abs(llr)) <= LLR_CLAMP


@pytest.mark.parametrize("var", [0.0, -1.0])
def test_rejects_bad_variance(var):
    with pytest.raises(InvalidArgumentError):
        demod_app(np.ones(4, complex), var)


def test_rejects_length_mismatch():
    y = np.ones(5, complex)
    with pytest.raises(InvalidArgumentError):
        demod_app(y, 1.0, prior=np.zeros(11))
    with pytest.raises(InvalidArgumentError):
        demod_app(y, 1.0, phase_track=np.zeros(4))
