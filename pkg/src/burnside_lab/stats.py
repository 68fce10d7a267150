"""Functionals of the chain: alternation counts, their exact moments under
the dynamics and under pi, ones-count moments, and the Monte Carlo
alternation histogram with its limit-law fit.

Under pi the normalized alternation count T(x)/(n-1) converges to
2U(1-U) for U uniform, with distribution function F(t) = 1 - sqrt(1 - 2t)
on [0, 1/2); the histogram fit records the sup-distance of the empirical
CDF from F.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from gmpy2 import mpq

from .chain import RngStream, State, sample_stationary_many
from .exactcore import Rational

__all__ = [
    "alternations",
    "expected_alternations_after",
    "stationary_alternation_variance",
    "ones_moments",
    "MomentReport",
    "Histogram",
    "FitReport",
    "alternation_histogram",
    "limit_cdf",
    "histogram_csv_rows",
]


def alternations(x: State) -> int:
    """T(x) = #{i : x_i != x_{i+1}} for binary states."""
    if x.k != 2:
        raise ValueError("alternation count is the k = 2 statistic")
    return sum(1 for a, b in zip(x.digits, x.digits[1:]) if a != b)


def expected_alternations_after(x: State, ell: int) -> Rational:
    """E[T(X_l) | X_0 = x] = (n-1)/3 - (1/4^l)((n-1)/3 - T(x)); the
    alternation indicators expand in the beta_1 eigenvectors."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    n = x.n
    mean = mpq(n - 1, 3)
    return mean - (mean - alternations(x)) / mpq(4) ** ell


def stationary_alternation_variance(n: int) -> Rational:
    """Var_pi(T) = (n^2 + 10n - 14)/45 for n >= 2."""
    if n < 2:
        raise ValueError("need n >= 2")
    return mpq(n * n + 10 * n - 14, 45)


@dataclass(frozen=True)
class MomentReport:
    quantity: str
    ell: int
    mean: Rational
    variance: Rational
    provenance: str

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError("variance must be nonnegative")


def ones_moments(x: State, ell: int) -> MomentReport:
    """Exact mean and variance of |X_l| started from x, for l >= 1:
    mean n/2 immediately, variance n(n+2)/12 (1 - 4^-l) + (|x| - n/2)^2 4^-l."""
    if x.k != 2:
        raise ValueError("ones-count moments are the k = 2 formulas")
    if ell < 1:
        raise ValueError("the closed forms hold for ell >= 1")
    n = x.n
    decay = mpq(1, mpq(4) ** ell)
    variance = mpq(n * (n + 2), 12) * (1 - decay)
    variance += (mpq(x.ones()) - mpq(n, 2)) ** 2 * decay
    return MomentReport(quantity="ones", ell=ell, mean=mpq(n, 2),
                        variance=variance, provenance="eigenfunction expansion")


@dataclass(frozen=True)
class Histogram:
    bin_edges: tuple
    counts: tuple
    sample_size: int
    seed: int
    stream: int

    def __post_init__(self):
        if sum(self.counts) != self.sample_size:
            raise ValueError("histogram counts must sum to the sample size")


@dataclass(frozen=True)
class FitReport:
    """Limit-law fit for T/(n-1).

    sup_cdf_discrepancy evaluates |F_hat - F| at the histogram's bin edges
    inside [0, 1/2); sup_cdf_discrepancy_dense takes the sup over all sample
    points below 1/2 and is dominated by the finite-n mass that sits just
    past 1/2, where the limit CDF has already saturated.
    """

    sample_size: int
    empirical_mean: float
    empirical_variance: float
    sup_cdf_discrepancy: float
    sup_cdf_discrepancy_dense: float


def limit_cdf(t: float) -> float:
    """F(t) = P(2U(1-U) <= t) = 1 - sqrt(1 - 2t) on [0, 1/2)."""
    if t < 0:
        return 0.0
    if t >= 0.5:
        return 1.0
    return 1.0 - math.sqrt(1.0 - 2.0 * t)


def alternation_histogram(n: int, samples: int, rng: RngStream,
                          bins: int = 50,
                          batch: int = 20000) -> "tuple[Histogram, FitReport]":
    """Sample T(x)/(n-1) under pi and compare to the 2U(1-U) limit.

    Bins are equal-width on [0, 1]; the fit report carries the empirical
    mean and variance and the sup-distance between the empirical CDF and
    1 - sqrt(1 - 2t) evaluated at the sample points.
    """
    gen = rng.generator()
    values = np.empty(samples, dtype=np.float64)
    done = 0
    while done < samples:
        take = min(batch, samples - done)
        digits = sample_stationary_many(n, 2, take, gen)
        t_counts = np.count_nonzero(digits[:, 1:] != digits[:, :-1], axis=1)
        values[done:done + take] = t_counts / (n - 1)
        done += take
    counts, edges = np.histogram(values, bins=bins, range=(0.0, 1.0))
    hist = Histogram(bin_edges=tuple(edges.tolist()),
                     counts=tuple(int(c) for c in counts),
                     sample_size=samples, seed=rng.seed, stream=rng.stream)
    interior = edges[(edges > 0.0) & (edges < 0.5)]
    ecdf_at = np.searchsorted(np.sort(values), interior, side="right") / samples
    sup_edges = float(np.max(np.abs(ecdf_at - np.array([limit_cdf(t) for t in interior]))))
    ordered = np.sort(values)
    below = ordered[ordered < 0.5]
    f_vals = np.array([limit_cdf(t) for t in below])
    pos = np.searchsorted(ordered, below, side="right") / samples
    pre = np.searchsorted(ordered, below, side="left") / samples
    sup_dense = float(np.max(np.maximum(np.abs(pos - f_vals), np.abs(f_vals - pre))))
    fit = FitReport(sample_size=samples,
                    empirical_mean=float(values.mean()),
                    empirical_variance=float(values.var(ddof=1)),
                    sup_cdf_discrepancy=sup_edges,
                    sup_cdf_discrepancy_dense=sup_dense)
    return hist, fit


def histogram_csv_rows(hist: Histogram) -> list:
    rows = [("bin_left", "bin_right", "count")]
    for left, right, count in zip(hist.bin_edges, hist.bin_edges[1:], hist.counts):
        rows.append((left, right, count))
    return rows
