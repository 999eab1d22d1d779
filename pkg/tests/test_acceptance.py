"""End-to-end acceptance gate.

Each criterion runs one named verification suite, prints a single pass/fail
line with the suite's detail and wall time, and asserts both the outcome and
the runtime budget. criterion 8 is split by noise family; the exponential part
currently fails, see the README note on the exponential privacy check.
"""
import time

import pytest

from dpexperts import verify

BUDGETS = {
    "exact-vs-mc": 120.0,
    "shape-K": 10.0,
    "shape-eps": 5.0,
    "t-independence": 600.0,
    "monotonicity": 120.0,
    "binomial": 5.0,
    "softmax-derivative": 10.0,
    "softmax-series": 10.0,
    "privacy-gumbel": 60.0,
    "privacy-laplace": 60.0,
    "privacy-exponential": 60.0,
    "tails": 120.0,
    "resampling": 60.0,
}


def _run(criterion: str, suite: str):
    start = time.perf_counter()
    result = verify.SUITES[suite]()
    elapsed = time.perf_counter() - start
    status = "PASS" if result.passed else "FAIL"
    print(f"[{criterion}] {status} ({elapsed:.1f}s) {result.detail}", flush=True)
    assert elapsed < BUDGETS[suite], f"{suite} exceeded {BUDGETS[suite]}s budget"
    assert result.passed, f"{criterion}: {result.detail}"


def test_criterion_01_exact_vs_monte_carlo():
    _run("criterion 1: exact vs Monte Carlo agreement", "exact-vs-mc")


def test_criterion_02_log_k_scaling():
    _run("criterion 2: regret scales like ln K", "shape-K")


def test_criterion_03_inverse_epsilon_scaling():
    _run("criterion 3: regret scales like 1/epsilon", "shape-eps")


def test_criterion_04_horizon_independence():
    _run("criterion 4: regret constant in T", "t-independence")


def test_criterion_05_selection_frequency_monotone():
    _run("criterion 5: selection frequencies monotone, <= 1/j", "monotonicity")


def test_criterion_06_binomial_cdf_monotone_grid():
    _run("criterion 6: binomial CDF monotone in p, exact grid", "binomial")


def test_criterion_07_softmax_derivative_and_series_bounds():
    _run("criterion 7a: derivative bound", "softmax-derivative")
    _run("criterion 7b: partial-sum bound", "softmax-series")


def test_criterion_08a_privacy_ratio_gumbel():
    _run("criterion 8a: Gumbel privacy ratio <= e^eps", "privacy-gumbel")


def test_criterion_08b_privacy_ratio_laplace():
    _run("criterion 8b: Laplace privacy ratio <= e^eps", "privacy-laplace")


def test_criterion_08c_privacy_ratio_exponential():
    # Known failure: one-sided exponential noise cannot give a two-sided e^eps
    # pmf-ratio guarantee at scale 1/eps (the worst grid ratio is 2e^eps - 1).
    # Kept as an honest red rather than loosening the threshold.
    _run("criterion 8c: Exponential privacy ratio <= e^eps", "privacy-exponential")


def test_criterion_09_selection_tail_bounds():
    _run("criterion 9: empirical tails below analytic bounds", "tails")


def test_criterion_10_resampling_first_selection():
    _run("criterion 10: resampling caps the first suboptimal pick at 1/2", "resampling")
