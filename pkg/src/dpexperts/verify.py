"""Named verification suites behind the CLI `verify` command.

Each suite checks one family of numeric claims (selection-frequency
monotonicity, tail bounds, privacy ratios, exact-vs-simulated agreement,
scaling shapes, ...) and returns a pass/fail result with a short detail line.
The acceptance tests call these same functions.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence

import numpy as np

from .analysis import (
    PARTIAL_SUM_CONSTANT,
    SoftmaxSpec,
    binomial_cdf,
    check_derivative_bound,
    exact_det_gumbel_regret,
    gumbel_privacy_ratio,
    partial_sum_f,
    tail_bound,
)
from .core import MechanismSpec, NoiseKind
from .harness import estimate_pseudoregret, selection_frequency
from .instances import (
    bernoulli_instance,
    paper_example_two_actions,
    uniform_grid_instance,
)
from .mechanism import rnm_pmf_oracle
from .noise import RngStream, noise_cdf, noise_ppf


@dataclass(frozen=True)
class VerifyResult:
    name: str
    passed: bool
    detail: str


def binomial_band(freq: float, trials: int) -> float:
    """3-sigma normal-approximation band for an empirical frequency."""
    p = min(max(freq, 0.0), 1.0)
    return 3.0 * math.sqrt(p * (1.0 - p) / trials) + 3.0 / trials


def check_exact_vs_mc(seed: int = 20240801, trials: int = 100_000) -> VerifyResult:
    """Monte Carlo pseudoregret (Gumbel, no resampling, deterministic instances)
    agrees with the exact calculator within 3 stderr on random small cells."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    failures = []
    for i in range(10):
        k = int(rng.integers(2, 5))
        means = np.round(rng.uniform(0.0, 1.0, size=k), 3)
        eps = float(rng.choice([0.5, 1.0, 2.0]))
        big_r = int(rng.integers(2, 7))
        horizon = (1 << big_r) - 1
        exact = exact_det_gumbel_regret(means, eps, big_r)
        from .instances import deterministic_instance

        est = estimate_pseudoregret(
            deterministic_instance(means),
            MechanismSpec(resample=0, noise=NoiseKind.GUMBEL, epsilon=eps),
            horizon, trials, seed + i,
        )
        slack = 3.0 * max(est.stderr, 1e-12)
        gap = abs(est.mean - exact)
        worst = max(worst, gap / slack if slack else 0.0)
        if gap > slack:
            failures.append(f"cell {i}: |{est.mean:.4f} - {exact:.4f}| > {slack:.4f}")
    return VerifyResult(
        "exact-vs-mc", not failures,
        failures[0] if failures else f"10 cells, worst |diff|/3stderr = {worst:.2f}",
    )


def check_shape_k() -> VerifyResult:
    """regret / ln K stays within a factor 2 across K for the exact calculator."""
    ks = [1 << i for i in range(3, 13)]
    normalized = [
        exact_det_gumbel_regret(np.arange(k) / (k - 1), 1.0, 40) / math.log(k)
        for k in ks
    ]
    ratio = max(normalized) / min(normalized)
    return VerifyResult("shape-K", ratio <= 2.0,
                        f"max/min of regret/lnK over K in 8..4096 = {ratio:.3f}")


def check_shape_eps() -> VerifyResult:
    """regret * eps varies by < 10% across eps for fixed K = 64."""
    k = 64
    means = np.arange(k) / (k - 1)
    vals = [exact_det_gumbel_regret(means, eps, 40) * eps
            for eps in (0.25, 0.5, 1.0, 2.0, 4.0)]
    spread = (max(vals) - min(vals)) / min(vals)
    return VerifyResult("shape-eps", spread < 0.10,
                        f"regret*eps spread over eps in 0.25..4 = {spread:.3%}")


def check_t_independence(seed: int = 77, trials: int = 10_000) -> VerifyResult:
    """Regret with resampling has converged: estimates at T=2^12-1 and 2^16-1
    differ by less than 3 combined stderr for every noise family."""
    instance = bernoulli_instance([0.1, 0.3, 0.5, 0.7])
    failures = []
    details = []
    for kind in (NoiseKind.LAPLACE, NoiseKind.EXPONENTIAL, NoiseKind.GUMBEL):
        spec = MechanismSpec(resample=1, noise=kind, epsilon=1.0)
        short = estimate_pseudoregret(instance, spec, (1 << 12) - 1, trials, seed)
        long = estimate_pseudoregret(instance, spec, (1 << 16) - 1, trials, seed + 1)
        band = 3.0 * math.hypot(short.stderr, long.stderr)
        diff = abs(short.mean - long.mean)
        details.append(f"{kind.value}: |{short.mean:.3f}-{long.mean:.3f}|={diff:.3f} vs {band:.3f}")
        if diff >= band:
            failures.append(kind.value)
    return VerifyResult("t-independence", not failures, "; ".join(details))


def check_monotonicity(seed: int = 5150, trials: int = 100_000) -> VerifyResult:
    """With resampling, selection frequencies at epoch 6 are nonincreasing in the
    mean ordering and bounded by 1/j, for all three noise families."""
    instance = bernoulli_instance([0.2, 0.5, 0.8])
    failures = []
    for kind in (NoiseKind.LAPLACE, NoiseKind.EXPONENTIAL, NoiseKind.GUMBEL):
        spec = MechanismSpec(resample=1, noise=kind, epsilon=1.0)
        freq = selection_frequency(instance, spec, 6, trials, seed)
        for j in range(len(freq) - 1):
            band = 3.0 * math.sqrt(
                (freq[j] * (1 - freq[j]) + freq[j + 1] * (1 - freq[j + 1])) / trials
            )
            if freq[j + 1] > freq[j] + band:
                failures.append(f"{kind.value}: freq not nonincreasing at {j}")
        for j in range(len(freq)):
            if freq[j] > 1.0 / (j + 1) + binomial_band(freq[j], trials):
                failures.append(f"{kind.value}: freq({j + 1}) = {freq[j]:.4f} > 1/{j + 1}")
    return VerifyResult("monotonicity", not failures,
                        failures[0] if failures else "3 kinds x 3 actions within bands")


def check_tail_bounds(seed: int = 90, trials: int = 100_000) -> VerifyResult:
    """Empirical selection probability of the gap-0.5 action stays below the
    analytic tail bound for the Exponential and Gumbel families."""
    instance = bernoulli_instance([0.1, 0.6])
    failures = []
    worst = 0.0
    for kind in (NoiseKind.EXPONENTIAL, NoiseKind.GUMBEL):
        spec = MechanismSpec(resample=1, noise=kind, epsilon=1.0)
        for r in range(4, 9):
            freq = selection_frequency(instance, spec, r, trials, seed + r)[1]
            bound = min(1.0, tail_bound(kind, r, 0.5, 1.0))
            limit = bound + binomial_band(bound, trials)
            worst = max(worst, freq / limit)
            if freq > limit:
                failures.append(f"{kind.value} r={r}: {freq:.5f} > {limit:.5f}")
    return VerifyResult("tails", not failures,
                        failures[0] if failures else f"worst freq/limit = {worst:.3f}")


def check_binomial_grid() -> VerifyResult:
    """Binomial CDF is nonincreasing in p: exact rational arithmetic over the
    0.05 grid for every n <= 50 and every k, plus float-vs-exact agreement."""

    def exact_cdf_vector(n: int, p: Fraction) -> List[Fraction]:
        q = 1 - p
        if q == 0:
            pmf = [Fraction(0)] * n + [Fraction(1)]
        else:
            pmf = [q ** n]
            for i in range(1, n + 1):
                pmf.append(pmf[-1] * (n - i + 1) * p / (i * q))
        out, acc = [], Fraction(0)
        for term in pmf:
            acc += term
            out.append(acc)
        return out

    grid = [Fraction(i, 20) for i in range(21)]
    violations = 0
    float_err = 0.0
    for n in range(1, 51):
        prev = None
        for p in grid:
            cur = exact_cdf_vector(n, p)
            if prev is not None:
                violations += sum(1 for a, b in zip(prev, cur) if a < b)
            prev = cur
        for k in (0, n // 2, n):
            float_err = max(float_err, abs(binomial_cdf(k, n, 0.35) - float(exact_cdf_vector(n, Fraction(7, 20))[k])))
    passed = violations == 0 and float_err <= 1e-12
    return VerifyResult("binomial", passed,
                        f"{violations} exact violations; float vs exact err {float_err:.2e}")


def check_softmax_derivative(seed: int = 11) -> VerifyResult:
    """Finite-difference check of the derivative bound f' <= ln2 * f."""
    rng = np.random.default_rng(seed)
    xs = np.linspace(-2.0, 10.0, 61)
    worst = -math.inf
    for _ in range(100):
        k = int(rng.integers(2, 17))
        a = rng.uniform(0.0, 8.0, size=k)
        a[rng.integers(k)] = 0.0
        worst = max(worst, check_derivative_bound(SoftmaxSpec(a), xs, 1e-5))
    return VerifyResult("softmax-derivative", worst <= 1e-6, f"max violation {worst:.2e}")


def check_softmax_series(seed: int = 13) -> VerifyResult:
    """Partial series sums stay below the explicit (1+ln2)/ln2 * lnK constant."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in (2, 8, 64, 512):
        bound = PARTIAL_SUM_CONSTANT * math.log(k)
        for _ in range(100):
            a = rng.uniform(0.0, 8.0, size=k)
            a[rng.integers(k)] = 0.0
            worst = max(worst, partial_sum_f(SoftmaxSpec(a), 60) / bound)
    return VerifyResult("softmax-series", worst <= 1.0, f"worst sum/bound = {worst:.3f}")


def _oracle_ratio_grid(kind: NoiseKind, epsilon: float, rng: np.random.Generator,
                       n_bases: int = 4) -> float:
    """Max oracle pmf ratio over per-coordinate perturbations in [-1, 1]."""
    spec = MechanismSpec(resample=0, noise=kind, epsilon=epsilon)
    worst = 0.0
    deltas = (-1.0, 0.0, 1.0)
    for _ in range(n_bases):
        k = int(rng.integers(2, 5))
        scores = np.round(rng.uniform(1.0, 4.0, size=k), 2)
        base = rnm_pmf_oracle(scores, spec)
        for shift in itertools.product(deltas, repeat=k):
            if not any(shift):
                continue
            other = rnm_pmf_oracle(scores + np.array(shift), spec)
            worst = max(worst, float(np.max(base / other)), float(np.max(other / base)))
    return worst


def check_privacy_gumbel(seed: int = 3) -> VerifyResult:
    """Exact softmax pmf ratio stays below e^eps on perturbation grids."""
    rng = np.random.default_rng(seed)
    failures = []
    worst_rel = 0.0
    for eps in (0.5, 1.0, 2.0):
        for _ in range(20):
            k = int(rng.integers(2, 6))
            scores = rng.uniform(0.0, 5.0, size=k)
            for shift in itertools.product((-1.0, -0.5, 0.0, 0.5, 1.0), repeat=k):
                ratio = gumbel_privacy_ratio(scores, scores + np.array(shift), eps)
                worst_rel = max(worst_rel, ratio / math.exp(eps))
                if ratio > math.exp(eps) + 1e-9:
                    failures.append(f"eps={eps}: ratio {ratio:.6f}")
    return VerifyResult("privacy-gumbel", not failures,
                        failures[0] if failures else f"worst ratio/e^eps = {worst_rel:.4f}")


def check_privacy_laplace(seed: int = 4) -> VerifyResult:
    worst = 0.0
    for eps in (0.5, 1.0, 2.0):
        ratio = _oracle_ratio_grid(NoiseKind.LAPLACE, eps, np.random.default_rng(seed))
        worst = max(worst, ratio / (math.exp(eps) + 1e-6))
    return VerifyResult("privacy-laplace", worst <= 1.0,
                        f"worst ratio/(e^eps+tol) = {worst:.4f}")


def check_privacy_exponential(seed: int = 4) -> VerifyResult:
    worst = 0.0
    for eps in (0.5, 1.0, 2.0):
        ratio = _oracle_ratio_grid(NoiseKind.EXPONENTIAL, eps, np.random.default_rng(seed))
        worst = max(worst, ratio / (math.exp(eps) + 1e-6))
    return VerifyResult("privacy-exponential", worst <= 1.0,
                        f"worst ratio/(e^eps+tol) = {worst:.4f}")


def check_resampling_effect(seed: int = 8, trials: int = 100_000) -> VerifyResult:
    """On the two-action example, resampling forces the first selection to favor
    the optimal action; the no-resampling frequency is recorded, not asserted."""
    instance = paper_example_two_actions()
    spec_on = MechanismSpec(resample=1, noise=NoiseKind.NONE)
    spec_off = MechanismSpec(resample=0, noise=NoiseKind.NONE)
    with_resample = selection_frequency(instance, spec_on, 1, trials, seed)[1]
    without = selection_frequency(instance, spec_off, 1, trials, seed + 1)[1]
    limit = 0.5 + binomial_band(0.5, trials)
    return VerifyResult(
        "resampling", with_resample <= limit,
        f"P[first pick suboptimal]: B=1 {with_resample:.4f} (<= {limit:.4f}); "
        f"B=0 {without:.4f} (recorded only)",
    )


def check_laplace_shape(seed: int = 21, trials: int = 20_000) -> VerifyResult:
    """Laplace noise on deterministic grid instances: regret * eps / ln^2 K shows
    no upward trend in K, i.e. the smallest K already attains the fitted constant."""
    eps = 1.0
    spec = MechanismSpec(resample=0, noise=NoiseKind.LAPLACE, epsilon=eps)
    normalized = {}
    slack = {}
    for k in (8, 16, 32, 64):
        est = estimate_pseudoregret(uniform_grid_instance(k), spec, (1 << 30) - 1,
                                    trials, seed + k)
        normalized[k] = est.mean * eps / math.log(k) ** 2
        slack[k] = 3.0 * est.stderr * eps / math.log(k) ** 2
    fitted = normalized[8]
    ok = all(normalized[k] <= fitted * 1.05 + slack[k] for k in normalized)
    detail = ", ".join(f"K={k}: {v:.3f}" for k, v in normalized.items())
    return VerifyResult("laplace-shape", ok, f"regret*eps/ln^2K by K: {detail}")


def check_noise_ks(seed: int = 600, samples: int = 100_000) -> VerifyResult:
    """Kolmogorov-Smirnov distance between sampler output and the analytic CDF."""
    worst = 0.0
    failures = []
    for i, kind in enumerate((NoiseKind.LAPLACE, NoiseKind.EXPONENTIAL, NoiseKind.GUMBEL)):
        for scale in (0.5, 1.0, 2.0):
            rng = RngStream(seed + 10 * i + int(scale * 4))
            xs = np.sort(noise_ppf(kind, rng.uniform(samples), scale))
            cdf = noise_cdf(kind, xs, scale)
            grid = np.arange(1, samples + 1) / samples
            ks = max(np.abs(cdf - grid).max(), np.abs(cdf - grid + 1.0 / samples).max())
            worst = max(worst, ks)
            if ks >= 0.01:
                failures.append(f"{kind.value} scale {scale}: KS {ks:.4f}")
    return VerifyResult("noise-ks", not failures, f"worst KS distance {worst:.4f}")


SUITES: Dict[str, Callable[[], VerifyResult]] = {
    "exact-vs-mc": check_exact_vs_mc,
    "shape-K": check_shape_k,
    "shape-eps": check_shape_eps,
    "t-independence": check_t_independence,
    "monotonicity": check_monotonicity,
    "binomial": check_binomial_grid,
    "softmax-derivative": check_softmax_derivative,
    "softmax-series": check_softmax_series,
    "privacy-gumbel": check_privacy_gumbel,
    "privacy-laplace": check_privacy_laplace,
    "privacy-exponential": check_privacy_exponential,
    "tails": check_tail_bounds,
    "resampling": check_resampling_effect,
    "laplace-shape": check_laplace_shape,
    "noise-ks": check_noise_ks,
}


def run_suites(names: Sequence[str]) -> List[VerifyResult]:
    return [SUITES[name]() for name in names]
