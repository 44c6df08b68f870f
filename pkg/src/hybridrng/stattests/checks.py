"""Individual randomness tests over ``uint32`` word arrays or 0/1 bit arrays.

Every test returns a :class:`TestReport`.  Verdicts are two-sided: a test
fails when its p-value is below ``alpha`` or above ``1 - alpha``.  The one
exception is a normal statistic of exactly zero, whose p-value of 1.0 is an
artifact of perfect balance rather than evidence of over-regularity; it
counts as a pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .pvalues import chi2_sf, normal_two_sided, poisson_sf

DEFAULT_ALPHA = 1e-3
TWO32 = float(1 << 32)
MAX_WORD = (1 << 32) - 1


class SampleSizeError(ValueError):
    """Raised when an input is too small (or a parameter out of range)."""


@dataclass
class TestReport:
    test_name: str
    statistic: float
    p_value: float
    n_samples: int
    alpha: float = DEFAULT_ALPHA
    params: dict = field(default_factory=dict)
    centered: bool = False  # statistic sat exactly at the null center

    __test__ = False  # keep pytest from collecting this class

    @property
    def passed(self) -> bool:
        if self.centered:
            return True
        return self.alpha <= self.p_value <= 1.0 - self.alpha

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def params_text(self) -> str:
        return ";".join(f"{k}={v}" for k, v in self.params.items())


def _as_bits(bits) -> np.ndarray:
    bits = np.asarray(bits)
    if bits.ndim != 1:
        raise ValueError("expected a 1-D bit sequence")
    return bits.astype(np.uint8, copy=False)


def _as_words(words) -> np.ndarray:
    words = np.asarray(words)
    if words.ndim != 1:
        raise ValueError("expected a 1-D word sequence")
    return words.astype(np.uint32, copy=False)


def _normal_report(name, z, n, alpha, params=None) -> TestReport:
    return TestReport(name, float(z), normal_two_sided(z), n, alpha,
                      params or {}, centered=(z == 0))


def monobit_from_count(ones: int, n: int, alpha: float = DEFAULT_ALPHA,
                       params=None) -> TestReport:
    if n < 100:
        raise SampleSizeError(f"monobit needs at least 100 bits, got {n}")
    z = (2 * ones - n) / math.sqrt(n)
    return _normal_report("monobit", z, n, alpha, params)


def monobit(bits, alpha: float = DEFAULT_ALPHA) -> TestReport:
    bits = _as_bits(bits)
    return monobit_from_count(int(np.count_nonzero(bits)), bits.size, alpha)


def runs_test(bits, alpha: float = DEFAULT_ALPHA) -> TestReport:
    """Wald-Wolfowitz runs test with the exact conditional mean and variance."""
    bits = _as_bits(bits)
    n = bits.size
    if n < 100:
        raise SampleSizeError(f"runs test needs at least 100 bits, got {n}")
    n1 = int(np.count_nonzero(bits))
    n0 = n - n1
    runs = 1 + int(np.count_nonzero(bits[1:] != bits[:-1]))
    if n1 == 0 or n0 == 0:
        return TestReport("runs", math.inf, 0.0, n, alpha, {"runs": runs})
    mean = 2.0 * n1 * n0 / n + 1.0
    var = (mean - 1.0) * (mean - 2.0) / (n - 1.0)
    z = (runs - mean) / math.sqrt(var)
    return _normal_report("runs", z, n, alpha)


def serial_pairs_chisq(words, bits_per_cell: int, shift: int | None = None,
                       alpha: float = DEFAULT_ALPHA) -> TestReport:
    """Chi-square on non-overlapping pairs of ``bits_per_cell``-bit fields.

    The field is ``(word >> shift) & (2**bits_per_cell - 1)``; *shift*
    defaults to the top of the word.  Every one of the ``4**bits_per_cell``
    cells must expect at least 5 pairs.
    """
    if not 1 <= bits_per_cell <= 16:
        raise ValueError("bits_per_cell must be in 1..16")
    if shift is None:
        shift = 32 - bits_per_cell
    if not 0 <= shift <= 32 - bits_per_cell:
        raise ValueError(f"shift {shift} leaves fewer than {bits_per_cell} bits")
    words = _as_words(words)
    pairs = words.size // 2
    cells = 1 << (2 * bits_per_cell)
    if pairs < 5 * cells:
        raise SampleSizeError(f"serial test with {cells} cells needs {5 * cells} pairs, got {pairs}")
    field_ = (words[: 2 * pairs] >> np.uint32(shift)) & np.uint32((1 << bits_per_cell) - 1)
    index = (field_[0::2].astype(np.int64) << bits_per_cell) | field_[1::2]
    counts = np.bincount(index, minlength=cells)
    expected = pairs / cells
    stat = float(np.sum((counts - expected) ** 2) / expected)
    return TestReport("serial_pairs", stat, chi2_sf(stat, cells - 1), pairs, alpha,
                      {"bits": bits_per_cell, "shift": shift})


def _interval_bounds(interval) -> tuple[int, int]:
    a, b = interval
    if not 0.0 <= a < b <= 1.0:
        raise ValueError(f"interval must satisfy 0 <= a < b <= 1, got {interval}")
    return math.ceil(a * TWO32), math.ceil(b * TWO32)


def gap_test(words, interval=(0.0, 0.5), max_gap: int | None = None,
             alpha: float = DEFAULT_ALPHA) -> TestReport:
    """Knuth's gap test on ``u = word / 2**32`` for hits in ``[a, b)``.

    Gap lengths 0..max_gap-1 get their own category and longer gaps share
    one.  When *max_gap* is omitted it is the largest value (capped at 64)
    that keeps every expected count at 5 or more.
    """
    words = _as_words(words)
    lo, hi = _interval_bounds(interval)
    p = (hi - lo) / TWO32
    inside = words >= lo
    if hi <= MAX_WORD:
        inside &= words < hi
    hits = np.flatnonzero(inside)
    n_gaps = hits.size - 1
    if n_gaps < 1:
        raise SampleSizeError("gap test found fewer than two hits")
    q = 1.0 - p
    if max_gap is None:
        max_gap = 0
        while (max_gap < 64 and n_gaps * p * q ** max_gap >= 5
               and n_gaps * q ** (max_gap + 1) >= 5):
            max_gap += 1
    if max_gap < 1:
        raise SampleSizeError(f"only {n_gaps} gaps; too few for a gap test")
    probs = np.append(p * q ** np.arange(max_gap), q ** max_gap)
    expected = n_gaps * probs
    if expected.min() < 5:
        raise SampleSizeError(f"expected gap count {expected.min():.2f} below 5")
    gaps = np.minimum(np.diff(hits) - 1, max_gap)
    counts = np.bincount(gaps, minlength=max_gap + 1)
    stat = float(np.sum((counts - expected) ** 2 / expected))
    return TestReport("gap", stat, chi2_sf(stat, max_gap), n_gaps, alpha,
                      {"a": interval[0], "b": interval[1], "max_gap": max_gap})


def birthday_spacings(words, m: int, d: int, alpha: float = DEFAULT_ALPHA) -> TestReport:
    """Birthday spacings over ``len(words) // m`` replications.

    Each replication drops *m* birthdays into *d* days (the top
    ``log2(d)`` bits of each word), sorts them, forms the *m* circular
    spacings and counts spacings equal to an earlier one.  The summed count
    is compared with Poisson of mean ``replications * m**3 / (4 d)``.
    """
    if d < 2 or d & (d - 1) or d > 1 << 32:
        raise ValueError("d must be a power of two in 2..2**32")
    if m < 2:
        raise ValueError("m must be at least 2")
    lam = m ** 3 / (4.0 * d)
    if not 1.0 <= lam <= 16.0:
        raise ValueError(f"lambda = m^3/(4d) = {lam:g} outside [1, 16]")
    words = _as_words(words)
    reps = words.size // m
    if reps < 1:
        raise SampleSizeError(f"birthday spacings needs at least m={m} words")
    shift = 32 - (d.bit_length() - 1)
    days = (words[: reps * m].reshape(reps, m) >> np.uint32(shift)).astype(np.int64)
    days.sort(axis=1)
    spacings = np.empty_like(days)
    spacings[:, 1:] = np.diff(days, axis=1)
    spacings[:, 0] = days[:, 0] + d - days[:, -1]
    spacings.sort(axis=1)
    collisions = int(np.count_nonzero(spacings[:, 1:] == spacings[:, :-1]))
    mean = reps * lam
    return TestReport("birthday_spacings", float(collisions), poisson_sf(collisions, mean),
                      reps * m, alpha, {"m": m, "d": d, "reps": reps, "mean": mean})


def lag_autocorrelation(words, lag: int, alpha: float = DEFAULT_ALPHA) -> TestReport:
    """Sample autocorrelation of ``word / 2**32`` at *lag*; statistic is the correlation."""
    if lag < 1:
        raise ValueError("lag must be at least 1")
    words = _as_words(words)
    n = words.size
    if n < 10_000:
        raise SampleSizeError(f"lag autocorrelation needs at least 10^4 words, got {n}")
    if lag >= n:
        raise ValueError("lag must be shorter than the sample")
    u = words / TWO32
    u -= u.mean()
    denom = float(np.dot(u, u))
    if denom == 0.0:
        return TestReport("lag_autocorrelation", math.nan, 0.0, n, alpha, {"lag": lag})
    r = float(np.dot(u[:-lag], u[lag:])) / denom
    z = r * n / math.sqrt(n - lag)
    report = _normal_report("lag_autocorrelation", z, n, alpha, {"lag": lag})
    report.statistic = r
    return report
