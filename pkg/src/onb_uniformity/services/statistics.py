"""
Small estimators shared by the Monte Carlo services.
"""
from dataclasses import dataclass

import numpy as np
from scipy.stats import binomtest

from ..core import config


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float

    def within(self, expected: float, sigma: float | None = None, slack: float = 0.0) -> bool:
        band = (config.SIGMA_BAND if sigma is None else sigma) * self.stderr
        return abs(self.value - expected) <= band + slack


def mean_estimate(values: np.ndarray) -> Estimate:
    values = np.asarray(values)
    n = values.shape[0]
    if n < 2:
        return Estimate(float(np.mean(values)), float("inf"))
    return Estimate(float(np.mean(values)), float(np.std(values, ddof=1) / np.sqrt(n)))


def covariance_estimate(a: np.ndarray, b: np.ndarray) -> Estimate:
    """Unbiased sample covariance with a delta-method standard error."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.shape[0]
    products = (a - a.mean()) * (b - b.mean())
    cov = float(products.sum() / (n - 1))
    stderr = float(np.std(products, ddof=1) / np.sqrt(n))
    return Estimate(cov, stderr)


def variance_estimate(values: np.ndarray) -> Estimate:
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    centered = (values - values.mean()) ** 2
    return Estimate(float(centered.sum() / (n - 1)), float(np.std(centered, ddof=1) / np.sqrt(n)))


def two_sample_agree(first: Estimate, second: Estimate, sigma: float | None = None) -> bool:
    band = (config.SIGMA_BAND if sigma is None else sigma) * np.hypot(first.stderr, second.stderr)
    return bool(abs(first.value - second.value) <= band)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return 0.0, 1.0
    interval = binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return float(interval.low), float(interval.high)


def two_proportion_agree(k1: int, n1: int, k2: int, n2: int, sigma: float | None = None) -> bool:
    """Pooled two-proportion comparison of k1/n1 against k2/n2."""
    pooled = (k1 + k2) / (n1 + n2)
    stderr = np.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    band = (config.SIGMA_BAND if sigma is None else sigma) * stderr
    return bool(abs(k1 / n1 - k2 / n2) <= band)
