"""Distances to stationarity for the Burnside chain.

Exact chi-square and total-variation values come from exact matrix powers;
the spectral route re-derives chi-square from the orthogonal eigenbasis and
must agree exactly.  The averaged distance has the closed form

    chi2_avg(l) = sum_{k=1}^{floor(n/2)} C(n, 2k) beta_k^(2l),    l >= 1,

which doubles as a log-space computation at n ~ 10^6 where the exact sum is
astronomically large.  Cutoff scans evaluate it at multiples of the cutoff
time (log 2 / 2) n / log((pi/2) n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from math import lgamma, log
from typing import Optional, Sequence

from gmpy2 import mpq, mpz

from .chain import Kernel, State, build_kernel, kernel_entry, stationary_probability
from .exactcore import LogReal, Rational, binomial
from .spectral import beta, build_basis

__all__ = [
    "DistanceCurve",
    "BoundReport",
    "chi2_exact",
    "tv_exact",
    "chi2_spectral",
    "chi2_avg",
    "chi2_avg_definition",
    "distance_curve",
    "bound_envelopes",
    "self_loop_lower_bound",
    "chi2_from_one_one",
    "OneOnesChi2",
    "cutoff_time",
    "cutoff_scan",
    "curve_csv_rows",
    "scan_csv_rows",
]


@lru_cache(maxsize=8)
def _cached_kernel(n: int, k: int) -> Kernel:
    return build_kernel(n, k)


def _power_row(kernel: Kernel, x_index: int, ell: int) -> list:
    """Row x of K^ell by repeated vector-matrix products."""
    size = kernel.size
    row = [mpq(1) if y == x_index else mpq(0) for y in range(size)]
    data = kernel.matrix.data
    for _ in range(ell):
        nxt = [mpq(0)] * size
        for x, weight in enumerate(row):
            if weight == 0:
                continue
            krow = data[x]
            for y in range(size):
                if krow[y]:
                    nxt[y] += weight * krow[y]
        row = nxt
    return row


def _chi2_of_row(row: Sequence, pi: Sequence) -> Rational:
    return sum((p - q) ** 2 / q for p, q in zip(row, pi))


def _tv_of_row(row: Sequence, pi: Sequence) -> Rational:
    return sum(abs(p - q) for p, q in zip(row, pi)) / 2


def chi2_exact(n: int, x: State, ell: int, kernel: Optional[Kernel] = None) -> Rational:
    """chi_x^2(l) = sum_y (K^l(x,y) - pi(y))^2 / pi(y), exactly."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    kernel = kernel or _cached_kernel(n, x.k)
    row = _power_row(kernel, x.index(), ell)
    return _chi2_of_row(row, kernel.stationary)


def tv_exact(n: int, x: State, ell: int, kernel: Optional[Kernel] = None) -> Rational:
    """||K_x^l - pi||_TV = (1/2) sum_y |K^l(x,y) - pi(y)|, exactly."""
    if ell < 0:
        raise ValueError("ell must be >= 0")
    kernel = kernel or _cached_kernel(n, x.k)
    row = _power_row(kernel, x.index(), ell)
    return _tv_of_row(row, kernel.stationary)


def chi2_spectral(n: int, x: State, s: int, basis: Optional[list] = None) -> Rational:
    """chi_x^2(s) summed over the orthogonal eigenbasis:
    sum (f_Q^{m,l}(x))^2 / <f,f> * beta^(2s), skipping the trivial vector.

    Valid for s >= 1 (zero-eigenvalue terms drop out)."""
    if s < 1:
        raise ValueError("spectral chi-square needs s >= 1")
    basis = basis if basis is not None else build_basis(n)
    idx = x.index()
    total = mpq(0)
    for vec in basis:
        if vec.m == 0 and vec.ell == 0:
            continue
        if vec.eigenvalue.k_index is None:
            continue
        value = vec.coordinates[idx]
        if value:
            total += value * value / vec.squared_norm * vec.eigenvalue.value ** (2 * s)
    return total


def chi2_avg(n: int, ell: int, mode: str = "exact"):
    """Average chi-square distance after ell steps.

    exact mode returns the rational sum of C(n,2k) beta_k^(2l); log-space
    mode returns a LogReal built from log-gamma binomials.  ell = 0 is
    rejected: the eigenvalue sum (which omits zero eigenvalues) gives
    2^(n-1) - 1 there while the definition gives 2^n - 1.
    """
    if ell < 1:
        raise ValueError(
            "chi2_avg needs ell >= 1: at ell = 0 the eigenvalue-sum form "
            "(2^(n-1) - 1) disagrees with the definition (2^n - 1)")
    if mode == "exact":
        total = mpq(0)
        for k in range(1, n // 2 + 1):
            total += binomial(n, 2 * k) * beta(k) ** (2 * ell)
        return total
    if mode == "log":
        total = LogReal.zero()
        log2 = log(2.0)
        for k in range(1, n // 2 + 1):
            log_binom = lgamma(n + 1) - lgamma(2 * k + 1) - lgamma(n - 2 * k + 1)
            log_beta = 2 * (lgamma(2 * k + 1) - 2 * lgamma(k + 1)) - 4 * k * log2
            total = total + LogReal.from_log(log_binom + 2 * ell * log_beta)
        return total
    raise ValueError("mode must be 'exact' or 'log'")


def chi2_avg_definition(n: int, ell: int, kernel: Optional[Kernel] = None) -> Rational:
    """Definition-level average sum_x pi(x) chi_x^2(l) via exact matrix
    powers; the independent cross-check for the eigenvalue-sum form."""
    kernel = kernel or _cached_kernel(n, 2)
    total = mpq(0)
    for idx in range(kernel.size):
        row = _power_row(kernel, idx, ell)
        total += kernel.stationary[idx] * _chi2_of_row(row, kernel.stationary)
    return total


@dataclass(frozen=True)
class DistanceCurve:
    """A sequence of (step, distance) points for one start and metric."""

    n: int
    k: int
    start: str
    metric: str
    points: tuple

    def values(self):
        return [v for _, v in self.points]


def distance_curve(n: int, x: State, metric: str, steps: Sequence[int],
                   kernel: Optional[Kernel] = None) -> DistanceCurve:
    """Exact distance curve; chi-square curves are checked nonincreasing in
    l for l >= 1 (forced by chi2(l) = sum f^2 beta^(2l))."""
    if metric not in ("chi2", "tv"):
        raise ValueError("metric must be 'chi2' or 'tv'")
    kernel = kernel or _cached_kernel(n, x.k)
    steps = sorted(set(steps))
    size = kernel.size
    row = [mpq(1) if y == x.index() else mpq(0) for y in range(size)]
    data = kernel.matrix.data
    points = []
    current = 0
    for ell in steps:
        while current < ell:
            nxt = [mpq(0)] * size
            for xi, weight in enumerate(row):
                if weight == 0:
                    continue
                krow = data[xi]
                for y in range(size):
                    if krow[y]:
                        nxt[y] += weight * krow[y]
            row = nxt
            current += 1
        if metric == "chi2":
            points.append((ell, _chi2_of_row(row, kernel.stationary)))
        else:
            points.append((ell, _tv_of_row(row, kernel.stationary)))
    if metric == "chi2":
        decreasing = [v for ell, v in points if ell >= 1]
        if any(a < b for a, b in zip(decreasing, decreasing[1:])):
            raise AssertionError("chi-square curve must be nonincreasing for l >= 1")
    return DistanceCurve(n=n, k=x.k, start=str(x), metric=metric,
                         points=tuple(points))


@dataclass(frozen=True)
class BoundReport:
    """Exact distances alongside the paper's bound envelopes at one step.

    aldous_tv_upper:   TV <= n (1/2)^l (coupling bound)
    chi2_lower_from_tv: 4 TV^2 <= chi2
    chi2_upper_2l:     chi2(l) <= (1/pi(x)) TV(2l)
    Bounds that do not apply are None, never infinity.
    """

    ell: int
    tv: Rational
    chi2: Rational
    aldous_tv_upper: Optional[Rational]
    chi2_lower_from_tv: Rational
    chi2_upper_2l: Optional[Rational]

    def holds(self) -> bool:
        ok = 4 * self.tv ** 2 <= self.chi2
        if self.aldous_tv_upper is not None:
            ok = ok and self.tv <= self.aldous_tv_upper
        if self.chi2_upper_2l is not None:
            ok = ok and self.chi2 <= self.chi2_upper_2l
        return ok


def bound_envelopes(n: int, x: State, ell: int,
                    kernel: Optional[Kernel] = None) -> BoundReport:
    kernel = kernel or _cached_kernel(n, x.k)
    tv = tv_exact(n, x, ell, kernel)
    chi2 = chi2_exact(n, x, ell, kernel)
    tv_2l = tv_exact(n, x, 2 * ell, kernel)
    pi_x = kernel.stationary[x.index()]
    return BoundReport(
        ell=ell,
        tv=tv,
        chi2=chi2,
        aldous_tv_upper=mpq(n, mpz(2) ** ell),
        chi2_lower_from_tv=4 * tv ** 2,
        chi2_upper_2l=tv_2l / pi_x,
    )


def self_loop_lower_bound(x: State, ell: int) -> Rational:
    """Single-term chi-square lower bound (K(x,x)^l / pi(x) - 1)^2 pi(x).

    Uses only the closed-form self-loop probability, so it scales to large n
    where the full state space is unreachable.  It bounds chi-square from
    below whenever K(x,x)^l >= pi(x), the slow-mixing regime it targets;
    past that crossover the substitution K^l(x,x) >= K(x,x)^l reverses and
    the value goes slack.
    """
    holding = kernel_entry(x, x)
    pi_x = stationary_probability(x)
    ratio = holding ** ell / pi_x
    return (ratio - 1) ** 2 * pi_x


@dataclass(frozen=True)
class OneOnesChi2:
    """Chi-square from a one-ones state with the constant-step envelope."""

    n: int
    s: int
    value: Rational
    lower: Rational
    upper: Rational

    @property
    def within_envelope(self) -> bool:
        return self.lower <= self.value <= self.upper


def _one_ones_m0_term(n: int, ell: int) -> Rational:
    """(f^{0,l}(e_n))^2 / <f^{0,l}, f^{0,l}>, both in closed form."""
    numerator = mpq(binomial(n - 1, ell) - ell * binomial(n - 1, ell - 1)) ** 2
    denom = mpq(1, (2 * ell + 1) * math.factorial(ell) ** 2) * mpq(1, n + 1)
    prod = mpq(1)
    for i in range(-ell + 1, ell + 2):
        prod *= n + i
    return numerator / (denom * prod)


def _one_ones_m1_term(n: int, ell: int) -> Rational:
    """Same for the shape-(n-1,1) tableau with n in its second row."""
    numerator = mpq((2 + ell) * binomial(n - 2, ell)) ** 2
    denom = mpq(ell + 2, (ell + 1) * (2 * ell + 3) * math.factorial(ell) ** 2)
    denom *= mpq(1, (n - 1) ** 2 * (n + 1))
    prod = mpq(1)
    for i in range(-ell - 1, ell + 2):
        prod *= n + i
    return numerator / (denom * prod)


def chi2_from_one_one(n: int, s: int) -> OneOnesChi2:
    """chi^2 from e_n = (0,...,0,1) assembled from the only two families of
    basis vectors that are nonzero there (m = 0, and m = 1 with n in the
    second row); exact for every n >= 3, s >= 1."""
    if n < 3:
        raise ValueError("closed-form assembly needs n >= 3")
    if s < 1:
        raise ValueError("s must be >= 1")
    total = mpq(0)
    for ell in range(2, n + 1, 2):
        total += _one_ones_m0_term(n, ell) * beta(ell // 2) ** (2 * s)
    for ell in range(1, n - 1, 2):
        total += _one_ones_m1_term(n, ell) * beta((1 + ell) // 2) ** (2 * s)
    envelope_unit = mpq(1, 4) ** (2 * s)
    return OneOnesChi2(n=n, s=s, value=total,
                       lower=5 * envelope_unit, upper=270 * envelope_unit)


def cutoff_time(n: int, refined: bool = True) -> float:
    """(log 2 / 2) n / log((pi/2) n), or the plain log n variant."""
    denom = log((math.pi / 2) * n) if refined else log(n)
    return (log(2.0) / 2.0) * n / denom


@dataclass(frozen=True)
class CutoffScanRow:
    n: int
    factor: float
    ell: int
    value: LogReal


def cutoff_scan(n_values: Sequence[int], factors: Sequence[float],
                refined: bool = True) -> list:
    """Log-space chi2_avg at ell = ceil(factor * cutoff_time(n))."""
    rows = []
    for n in n_values:
        t = cutoff_time(n, refined=refined)
        for factor in factors:
            ell = max(1, math.ceil(factor * t))
            rows.append(CutoffScanRow(n=n, factor=factor, ell=ell,
                                      value=chi2_avg(n, ell, mode="log")))
    return rows


def curve_csv_rows(curve: DistanceCurve) -> list:
    rows = [("n", "start", "metric", "step", "value_num", "value_den")]
    for ell, value in curve.points:
        value = mpq(value)
        rows.append((curve.n, curve.start, curve.metric, ell,
                     int(value.numerator), int(value.denominator)))
    return rows


def scan_csv_rows(rows: Sequence[CutoffScanRow]) -> list:
    out = [("n", "factor", "ell", "log_value", "sign")]
    for r in rows:
        out.append((r.n, r.factor, r.ell, r.value.logmag, r.value.sign))
    return out
