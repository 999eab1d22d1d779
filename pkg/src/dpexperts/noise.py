"""Seeded uniform streams and inverse-CDF sampling for the three noise families.

Everything is derived from a single uniform stream per RngStream so that sample
sequences are bit-reproducible from the seed alone.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .core import MechanismSpec, NoiseKind

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# Clamp uniforms away from {0, 1} before logs; keeps inverse CDFs finite.
_U_EPS = 1e-300
_U_TOP = 1.0 - 1e-16


def splitmix64(z: int) -> int:
    """One SplitMix64 step: add the golden-ratio increment, then finalize-mix."""
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(base: int, *indices: int) -> int:
    """Mix a base seed with stream indices.

    Documented derivation: start from splitmix64(base) and fold in each index i
    as h = splitmix64(h XOR splitmix64(i)). Trial/cell streams derived this way
    are order-independent and statistically independent.
    """
    h = splitmix64(base & _MASK64)
    for i in indices:
        h = splitmix64(h ^ splitmix64(i & _MASK64))
    return h


class RngStream:
    """Deterministic 64-bit-seeded uniform stream (PCG64). Single-owner."""

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, size=None):
        """Uniforms in [0, 1); the only primitive every sampler consumes."""
        return self._gen.random(size)

    @property
    def generator(self) -> np.random.Generator:
        """Underlying generator, for bulk discrete sampling (binomial, multinomial)."""
        return self._gen

    def index(self, k: int) -> int:
        """Uniform index in {0, ..., k-1} from one uniform draw."""
        return min(int(self.uniform() * k), k - 1)


# --- Laplace(beta): density 1/(2 beta) exp(-|x|/beta) ---

def laplace_pdf(x, scale: float):
    return np.exp(-np.abs(np.asarray(x, float)) / scale) / (2.0 * scale)


def laplace_cdf(x, scale: float):
    x = np.asarray(x, float)
    return np.where(x < 0.0, 0.5 * np.exp(x / scale), 1.0 - 0.5 * np.exp(-x / scale))


def laplace_ppf(u, scale: float):
    u = np.clip(np.asarray(u, float), _U_EPS, _U_TOP)
    return np.where(u < 0.5, scale * np.log(2.0 * u), -scale * np.log(2.0 * (1.0 - u)))


# --- Exponential(beta): density (1/beta) exp(-x/beta) on x >= 0 ---

def exponential_pdf(x, scale: float):
    x = np.asarray(x, float)
    return np.where(x < 0.0, 0.0, np.exp(-x / scale) / scale)


def exponential_cdf(x, scale: float):
    x = np.asarray(x, float)
    return np.where(x < 0.0, 0.0, -np.expm1(-x / scale))


def exponential_ppf(u, scale: float):
    u = np.clip(np.asarray(u, float), 0.0, _U_TOP)
    return -scale * np.log1p(-u)


# --- Gumbel(beta): density (1/beta) exp(-x/beta - exp(-x/beta)) ---

def gumbel_pdf(x, scale: float):
    z = np.asarray(x, float) / scale
    return np.exp(-z - np.exp(-z)) / scale


def gumbel_cdf(x, scale: float):
    return np.exp(-np.exp(-np.asarray(x, float) / scale))


def gumbel_ppf(u, scale: float):
    u = np.clip(np.asarray(u, float), _U_EPS, _U_TOP)
    return -scale * np.log(-np.log(u))


def sample_laplace(scale: float, rng: RngStream, size=None):
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    return laplace_ppf(rng.uniform(size), scale)


def sample_exponential(scale: float, rng: RngStream, size=None):
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    return exponential_ppf(rng.uniform(size), scale)


def sample_gumbel(scale: float, rng: RngStream, size=None):
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    return gumbel_ppf(rng.uniform(size), scale)


def noise_scale(spec: MechanismSpec) -> float:
    """Scale of the configured noise: 2/eps, 1/eps, 2/eps, or 0 for no noise."""
    return spec.scale()


_PPF = {
    NoiseKind.LAPLACE: laplace_ppf,
    NoiseKind.EXPONENTIAL: exponential_ppf,
    NoiseKind.GUMBEL: gumbel_ppf,
}

_PDF = {
    NoiseKind.LAPLACE: laplace_pdf,
    NoiseKind.EXPONENTIAL: exponential_pdf,
    NoiseKind.GUMBEL: gumbel_pdf,
}

_CDF = {
    NoiseKind.LAPLACE: laplace_cdf,
    NoiseKind.EXPONENTIAL: exponential_cdf,
    NoiseKind.GUMBEL: gumbel_cdf,
}


def noise_ppf(kind: NoiseKind, u, scale: float):
    return _PPF[kind](u, scale)


def noise_pdf(kind: NoiseKind, x, scale: float):
    return _PDF[kind](x, scale)


def noise_cdf(kind: NoiseKind, x, scale: float):
    return _CDF[kind](x, scale)


def sample_noise(spec: MechanismSpec, rng: RngStream, size=None):
    """Draw from the spec's noise family; zeros for the no-noise case."""
    if spec.noise is NoiseKind.NONE:
        return np.zeros(size if size is not None else ())
    return noise_ppf(spec.noise, rng.uniform(size), spec.scale())
