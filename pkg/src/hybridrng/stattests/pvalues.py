"""Tail probabilities for the reference distributions used by the tests."""

from __future__ import annotations

import math

from scipy.special import gammainc, gammaincc

SQRT2 = math.sqrt(2.0)


def normal_two_sided(z: float) -> float:
    """P(|Z| >= |z|) for a standard normal Z."""
    if math.isnan(z):
        return 0.0
    return math.erfc(abs(z) / SQRT2)


def chi2_sf(statistic: float, df: int) -> float:
    """Upper tail of the chi-square distribution, Q(df/2, x/2)."""
    if df <= 0:
        raise ValueError("df must be positive")
    if statistic <= 0:
        return 1.0
    return float(gammaincc(df / 2.0, statistic / 2.0))


def poisson_sf(count: int, mean: float) -> float:
    """P(X >= count) for X ~ Poisson(mean), via the lower incomplete gamma."""
    if count <= 0:
        return 1.0
    return float(gammainc(count, mean))
