"""Per-epoch selection: Bernoulli resampling, report-noisy-max, and exact pmf oracles."""
from __future__ import annotations

import numpy as np
from scipy import integrate

from .core import MechanismSpec, NoiseKind, OutOfRange
from .noise import RngStream, noise_cdf, noise_pdf, noise_ppf, sample_noise

# Quadrature oracle is for small-instance verification only.
ORACLE_MAX_ACTIONS = 8
_TAIL_Q = 1e-12

# Accumulated scores that are equal as real numbers can differ in the last few
# ulps depending on summation order, so noiseless tie detection uses a relative
# tolerance instead of exact float equality.
TIE_RTOL = 1e-9


def _tie_mask(scores: np.ndarray, mins) -> np.ndarray:
    return scores <= mins + TIE_RTOL * (1.0 + np.abs(mins))


class TooManyActions(ValueError):
    """Quadrature oracle called with more actions than it is meant for."""


def bernoulli_resample(loss: np.ndarray, rng: RngStream) -> np.ndarray:
    """Replace each loss in [0, 1] by an independent Bernoulli bit with that mean."""
    loss = np.asarray(loss, dtype=float)
    if loss.size and (loss.min() < 0.0 or loss.max() > 1.0):
        raise OutOfRange("losses must lie in [0, 1]")
    return (rng.uniform(loss.shape) < loss).astype(float)


def _argmin_random_ties(scores: np.ndarray, rng: RngStream) -> int:
    ties = np.flatnonzero(_tie_mask(scores, scores.min()))
    if len(ties) == 1:
        return int(ties[0])
    return int(ties[rng.index(len(ties))])


def report_noisy_max(scores: np.ndarray, spec: MechanismSpec, rng: RngStream) -> int:
    """argmax_j of (-G_j + Q_j); without noise, argmin of G with uniform tie-breaking."""
    scores = np.asarray(scores, dtype=float)
    if spec.noise is NoiseKind.NONE:
        return _argmin_random_ties(scores, rng)
    noisy = -scores + sample_noise(spec, rng, size=scores.shape)
    return int(np.argmax(noisy))


def select_batch(scores: np.ndarray, spec: MechanismSpec, rng: RngStream) -> np.ndarray:
    """Vectorized report_noisy_max over rows of a (trials, K) score matrix."""
    scores = np.atleast_2d(np.asarray(scores, dtype=float))
    n, k = scores.shape
    if spec.noise is NoiseKind.NONE:
        mins = scores.min(axis=1, keepdims=True)
        is_min = _tie_mask(scores, mins)
        counts = is_min.sum(axis=1)
        pick = np.minimum((rng.uniform(n) * counts).astype(int), counts - 1)
        cum = np.cumsum(is_min, axis=1)
        return np.argmax(cum == (pick + 1)[:, None], axis=1)
    noisy = -scores + noise_ppf(spec.noise, rng.uniform((n, k)), spec.scale())
    return np.argmax(noisy, axis=1)


def gumbel_selection_pmf(scores: np.ndarray, epsilon: float) -> np.ndarray:
    """Exact selection pmf under Gumbel(2/eps) noise: softmax of -G * eps / 2.

    Matches the sampled noise scale, so the pmf and the sampler agree exactly.
    """
    if epsilon <= 0.0:
        raise OutOfRange("epsilon must be positive")
    z = -np.asarray(scores, dtype=float) * (epsilon / 2.0)
    z = z - z.max()
    p = np.exp(z)
    return p / p.sum()


def log_gumbel_selection_pmf(scores: np.ndarray, epsilon: float) -> np.ndarray:
    """Log of gumbel_selection_pmf, usable when probabilities underflow."""
    if epsilon <= 0.0:
        raise OutOfRange("epsilon must be positive")
    z = -np.asarray(scores, dtype=float) * (epsilon / 2.0)
    z = z - z.max()
    return z - np.log(np.exp(z).sum())


def rnm_pmf_oracle(scores: np.ndarray, spec: MechanismSpec) -> np.ndarray:
    """Selection pmf by adaptive quadrature: p_j = int f(q) prod_i F(q + G_i - G_j) dq.

    Independent of the samplers and of the Gumbel closed form. Noise integrals
    are truncated at the 1e-12 / (1 - 1e-12) quantiles, so the tail error stays
    below the 1e-9 quadrature tolerance.
    """
    scores = np.asarray(scores, dtype=float)
    k = scores.size
    if k > ORACLE_MAX_ACTIONS:
        raise TooManyActions(f"oracle supports at most {ORACLE_MAX_ACTIONS} actions, got {k}")
    if spec.noise is NoiseKind.NONE:
        ties = _tie_mask(scores, scores.min())
        return ties / ties.sum()

    kind, scale = spec.noise, spec.scale()
    lo = float(noise_ppf(kind, _TAIL_Q, scale))
    hi = float(noise_ppf(kind, 1.0 - _TAIL_Q, scale))
    if kind is NoiseKind.EXPONENTIAL:
        lo = 0.0

    pmf = np.empty(k)
    for j in range(k):
        shifts = np.delete(scores, j) - scores[j]

        def integrand(q, shifts=shifts):
            val = noise_pdf(kind, q, scale)
            for s in shifts:
                val = val * noise_cdf(kind, q + s, scale)
            return val

        # The integrand concentrates where each shifted CDF transitions; pass
        # those transition points so adaptive quadrature refines around them.
        points = [p for p in (-shifts).tolist() if lo < p < hi]
        pmf[j], _ = integrate.quad(
            integrand, lo, hi, points=sorted(points) or None,
            epsabs=1e-11, epsrel=1e-11, limit=400,
        )
    return pmf
