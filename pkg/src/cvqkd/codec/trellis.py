"""Forward-backward APP demodulator for differentially encoded 8-PSK.

The trellis state at time ``i`` is the absolute phase index of ``X[i]``
relative to the reference symbol; symbol ``m`` moves state ``s`` to
``(s + m) mod 8``. All recursions run in the log domain with the exact
Jacobian logarithm, so the outputs are true marginals rather than max-log
approximations.
"""

import math

import numba as nb
import numpy as np

from ..errors import InvalidArgumentError
from .modulation import BITS_PER_SYMBOL, CONSTELLATION, LABEL_BITS, PSK_ORDER
from .outer import LLR_CLAMP

_SIGNS = np.where(LABEL_BITS == 0, 0.5, -0.5)  # (8, 3)


@nb.njit(cache=True)
def _logaddexp(a, b):
    if a == -np.inf:
        return b
    if b == -np.inf:
        return a
    if a > b:
        return a + math.log1p(math.exp(b - a))
    return b + math.log1p(math.exp(a - b))


@nb.njit(cache=True)
def _forward_backward(chan, prior_sym, label_bits):
    n_sym = prior_sym.shape[0]
    q = chan.shape[1]
    alpha = np.full((n_sym + 1, q), -np.inf)
    alpha[0, 0] = 0.0
    for i in range(n_sym):
        for s2 in range(q):
            acc = -np.inf
            for m in range(q):
                s = (s2 - m) % q
                acc = _logaddexp(acc, alpha[i, s] + prior_sym[i, m])
            alpha[i + 1, s2] = acc + chan[i + 1, s2]
        top = alpha[i + 1].max()
        for s in range(q):
            alpha[i + 1, s] -= top

    beta = np.zeros((n_sym + 1, q))
    for i in range(n_sym - 1, -1, -1):
        for s in range(q):
            acc = -np.inf
            for m in range(q):
                s2 = (s + m) % q
                acc = _logaddexp(acc, prior_sym[i, m] + chan[i + 1, s2] + beta[i + 1, s2])
            beta[i, s] = acc
        top = beta[i].max()
        for s in range(q):
            beta[i, s] -= top

    nbits = label_bits.shape[1]
    app = np.empty((n_sym, nbits))
    num = np.empty(nbits)
    den = np.empty(nbits)
    for i in range(n_sym):
        for j in range(nbits):
            num[j] = -np.inf
            den[j] = -np.inf
        for s in range(q):
            if alpha[i, s] == -np.inf:
                continue
            for m in range(q):
                s2 = (s + m) % q
                v = alpha[i, s] + prior_sym[i, m] + chan[i + 1, s2] + beta[i + 1, s2]
                for j in range(nbits):
                    if label_bits[m, j] == 0:
                        num[j] = _logaddexp(num[j], v)
                    else:
                        den[j] = _logaddexp(den[j], v)
        for j in range(nbits):
            app[i, j] = num[j] - den[j]

    post = alpha + beta
    for i in range(n_sym + 1):
        top = post[i].max()
        total = 0.0
        for s in range(q):
            post[i, s] = math.exp(post[i, s] - top)
            total += post[i, s]
        for s in range(q):
            post[i, s] /= total
    return app, post


def _validate(y, noise_variance, prior, phase_track):
    y = np.asarray(y, dtype=complex)
    if y.ndim != 1 or y.size < 2:
        raise InvalidArgumentError("received sequence must hold at least the reference and one symbol")
    if not noise_variance > 0:
        raise InvalidArgumentError(f"noise variance must be positive, got {noise_variance}")
    n_sym = y.size - 1
    if prior is None:
        prior = np.zeros(BITS_PER_SYMBOL * n_sym)
    prior = np.asarray(prior, dtype=float)
    if prior.shape != (BITS_PER_SYMBOL * n_sym,):
        raise InvalidArgumentError(
            f"prior length {prior.size} does not match {BITS_PER_SYMBOL * n_sym} interleaved bits"
        )
    if phase_track is None:
        phase_track = np.zeros(y.size)
    phase_track = np.asarray(phase_track, dtype=float)
    if phase_track.shape != y.shape:
        raise InvalidArgumentError("phase track length must equal the received length")
    return y, prior, phase_track


def branch_metrics(y, noise_variance, phase_track, reference_symbol=1 + 0j):
    """Log-likelihood of each received sample under each trellis state, shape ``(R, 8)``."""
    points = reference_symbol * CONSTELLATION
    derot = y * np.exp(-1j * phase_track)
    return -np.abs(derot[:, None] - points[None, :]) ** 2 / (2.0 * noise_variance)


def symbol_log_priors(prior_llrs) -> np.ndarray:
    """Per-symbol log priors (up to a constant) from interleaved-bit LLRs."""
    lab = np.clip(np.asarray(prior_llrs, dtype=float), -LLR_CLAMP, LLR_CLAMP)
    lab = lab.reshape(-1, BITS_PER_SYMBOL)
    return lab @ _SIGNS.T


def app_messages(y, noise_variance, prior=None, phase_track=None, reference_symbol=1 + 0j):
    """Run the APP demodulator and return ``(extrinsic_llrs, state_posteriors)``.

    ``state_posteriors[i, s]`` is the posterior probability that
    ``X[i] = reference_symbol * exp(2j*pi*s/8)``.
    """
    y, prior, phase_track = _validate(y, noise_variance, prior, phase_track)
    chan = branch_metrics(y, noise_variance, phase_track, reference_symbol)
    clamped = np.clip(prior, -LLR_CLAMP, LLR_CLAMP)
    app, post = _forward_backward(chan, symbol_log_priors(clamped), LABEL_BITS.astype(np.int64))
    ext = np.clip(app.ravel() - clamped, -LLR_CLAMP, LLR_CLAMP)
    return ext, post


def demod_app(y, noise_variance, prior=None, phase_track=None, reference_symbol=1 + 0j) -> np.ndarray:
    """Extrinsic LLRs (positive favours 0) of the ``3 * (len(y) - 1)`` interleaved bits.

    Args:
        y: Received samples ``X_B``, including the reference symbol at index 0.
        noise_variance: Per-quadrature noise variance.
        prior: A priori LLRs from the outer decoder, or ``None`` for uniform.
        phase_track: Channel phase per received sample; zeros when omitted.
        reference_symbol: Known ``X_A[0]``; pins the initial trellis state.
    """
    return app_messages(y, noise_variance, prior, phase_track, reference_symbol)[0]


def soft_symbols(state_posteriors, reference_symbol=1 + 0j) -> np.ndarray:
    """Posterior mean of each transmitted symbol."""
    return state_posteriors @ (reference_symbol * CONSTELLATION)


__all__ = ["PSK_ORDER", "app_messages", "branch_metrics", "demod_app", "soft_symbols", "symbol_log_priors"]
