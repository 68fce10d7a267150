"""One-shot machine checks for the chain's identities, tables, lumpings,
and conjectures.  Every check returns a CheckResult; a failing check always
carries a witness (first counterexample or a summary of the gap).

All checks are exact except the eigenvalue survey mode, which is tagged
with its clustering tolerance.  Results are deterministic: random grids use
fixed seeds and sampled subsets are chosen by deterministic rules.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from gmpy2 import mpq, mpz

from .chain import (
    Kernel,
    State,
    build_kernel,
    kernel_entry,
    lump_to_coordinates,
    lump_to_orbits,
    orbit_kernel,
    pair_class_matrix,
)
from .chain import _entry_from_counts  # shared closed-form entry cache
from .exactcore import (
    RationalMatrix,
    binomial,
    modp_rank,
    modp_value,
    rational_nullspace,
    rational_rank,
)
from .spectral import (
    Tableau,
    beta,
    build_basis,
    build_g_Q,
    chebyshev_eval,
    column_reading_tableau,
    enumerate_tableaux,
    gram_normalized,
    inner_product,
    jm_apply,
    multiplicity_table,
    phi_expand,
    pi_weights,
    subset_self_inner,
    subset_vector,
    tableau_count,
)

__all__ = [
    "CheckResult",
    "verify_eigenstructure",
    "verify_orthobasis",
    "verify_lumpings",
    "verify_identities_appendixA",
    "verify_johnson_gram",
    "verify_pplus_conjecture",
    "verify_ck_multiplicities",
    "verify_statistics_identities",
    "SUITES",
    "run_suite",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    params: tuple
    status: str
    witness: Optional[str] = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in ("pass", "fail"):
            raise ValueError("status must be pass or fail")
        if self.status == "fail" and not self.witness:
            raise ValueError("failing checks must carry a witness")

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _result(name, params, failures, details=None) -> CheckResult:
    if failures:
        return CheckResult(name, tuple(params), "fail", failures[0],
                           dict(details or {}, failure_count=len(failures)))
    return CheckResult(name, tuple(params), "pass", None, dict(details or {}))


# ---------------------------------------------------------------------------
# eigenstructure of the binary chain


def _subsets_by_mask(n: int):
    for mask in range(1 << n):
        yield mask, [i + 1 for i in range(n) if (mask >> i) & 1]


def verify_eigenstructure(n: int) -> CheckResult:
    """K f_S = beta f_S for every subset, rank of the even family, and the
    multiplicity table confirmed through rational ranks of K - beta I."""
    failures = []
    kernel = build_kernel(n, 2)
    size = kernel.size
    even_stack = []
    for mask, subset in _subsets_by_mask(n):
        vec = subset_vector(n, subset)
        m = len(subset)
        lam = beta(m // 2) if m % 2 == 0 else mpq(0)
        kf = kernel.matrix.matvec(vec)
        if any(a != lam * b for a, b in zip(kf, vec)):
            failures.append("eigen-equation fails for S=%r" % (subset,))
        if m % 2 == 0:
            even_stack.append(vec)
    rank_even = rational_rank(RationalMatrix(even_stack))
    if rank_even != 2 ** (n - 1):
        failures.append("even-subset family has rank %d, expected %d"
                        % (rank_even, 2 ** (n - 1)))
    mults = {}
    for lam, expected in multiplicity_table(n).items():
        shifted = kernel.matrix.sub_scaled_identity(lam)
        nullity = size - rational_rank(shifted)
        mults[str(lam)] = nullity
        if nullity != expected:
            failures.append("eigenvalue %s has multiplicity %d, expected %d"
                            % (lam, nullity, expected))
    return _result("eigenstructure", (n,), failures,
                   {"multiplicities": mults})


# ---------------------------------------------------------------------------
# orthogonal basis, golden tables, Parseval

_FIG_STATE_ORDER = ["000", "001", "010", "011", "100", "101", "110", "111"]

# (m, ell, second_row) -> coordinates in the state order above
_GOLDEN_G = {
    (0, 0, ()): [1, 0, 0, 0, 0, 0, 0, 0],
    (0, 1, ()): [0, 1, 1, 0, 1, 0, 0, 0],
    (1, 0, (3,)): [0, 1, mpq(-1, 2), 0, mpq(-1, 2), 0, 0, 0],
    (1, 0, (2,)): [0, 0, 1, 0, -1, 0, 0, 0],
    (0, 2, ()): [0, 0, 0, 1, 0, 1, 1, 0],
    (1, 1, (3,)): [0, 0, 0, mpq(1, 2), 0, mpq(1, 2), -1, 0],
    (1, 1, (2,)): [0, 0, 0, 1, 0, -1, 0, 0],
    (0, 3, ()): [0, 0, 0, 0, 0, 0, 0, 1],
}

_GOLDEN_F = {
    (0, 0, ()): ([1, 1, 1, 1, 1, 1, 1, 1], mpq(1)),
    (0, 1, ()): ([3, 1, 1, -1, 1, -1, -1, -3], mpq(5)),
    (1, 0, (3,)): ([0, -2, 1, -1, 1, -1, 2, 0], mpq(1)),
    (1, 0, (2,)): ([0, 0, -2, -2, 2, 2, 0, 0], mpq(4, 3)),
    (0, 2, ()): ([3, -3, -3, -3, -3, -3, -3, 3], mpq(9)),
    (1, 1, (3,)): ([0, -3, mpq(3, 2), mpq(3, 2), mpq(3, 2), mpq(3, 2), -3, 0], mpq(9, 4)),
    (1, 1, (2,)): ([0, 0, -3, 3, 3, -3, 0, 0], mpq(3)),
    (0, 3, ()): ([1, -3, -3, 3, -3, 3, 3, -1], mpq(5)),
}


def _fig_order(coords, n=3):
    return [coords[State.from_string(s).index()] for s in _FIG_STATE_ORDER]


def verify_orthobasis(n: int) -> CheckResult:
    """Orthogonality, closed-form norms, Parseval, the Phi identity and JM
    grading, the n = 3 golden tables, and the per-shape eigenvalue layout."""
    failures = []
    kernel = build_kernel(n, 2)
    basis = build_basis(n, check_kernel=kernel)
    weights = pi_weights(n)
    stack = RationalMatrix([list(v.coordinates) for v in basis])
    if rational_rank(stack) != 1 << n:
        failures.append("orthogonal family does not span: rank < 2^n")
    for vec in basis:
        direct = inner_product(vec.coordinates, vec.coordinates, weights)
        if direct != vec.squared_norm:
            failures.append("norm mismatch at (m=%d, l=%d, Q=%r)"
                            % (vec.m, vec.ell, vec.tableau.second_row))
    for a, b in itertools.combinations(basis, 2):
        if inner_product(a.coordinates, b.coordinates, weights) != 0:
            failures.append("nonzero inner product between (%d,%d,%r) and (%d,%d,%r)"
                            % (a.m, a.ell, a.tableau.second_row,
                               b.m, b.ell, b.tableau.second_row))
            break
    if n <= 6:
        for x in range(1 << n):
            total = sum(v.coordinates[x] ** 2 / v.squared_norm for v in basis)
            if total * weights[x] != 1:
                failures.append("Parseval fails at state %d" % x)
                break
    if n <= 5:
        for vec in basis:
            g = build_g_Q(n, vec.m, vec.ell, vec.tableau)
            if tuple(phi_expand(g)) != vec.coordinates:
                failures.append("Phi(g) != f at (m=%d, l=%d, Q=%r)"
                                % (vec.m, vec.ell, vec.tableau.second_row))
                break
        for vec in basis:
            for r in range(2, n + 1):
                ct = vec.tableau.content(r)
                mv = jm_apply(r, list(vec.coordinates))
                if any(a != ct * b for a, b in zip(mv, vec.coordinates)):
                    failures.append("JM grading fails at (m=%d, l=%d, Q=%r), r=%d"
                                    % (vec.m, vec.ell, vec.tableau.second_row, r))
                    break
    # eigenvalue layout per shape: beta_j meets shape (n-m, m) iff
    # m <= min(2j, n-2j), with one vector per tableau of the shape
    for j in range(n // 2 + 1):
        for m in range(n // 2 + 1):
            count = sum(1 for v in basis
                        if v.m == m and v.eigenvalue.k_index == j)
            expected = tableau_count(n, m) if m <= min(2 * j, n - 2 * j) else 0
            if count != expected:
                failures.append(
                    "beta_%d appears %d times in shape m=%d, expected %d"
                    % (j, count, m, expected))
    if n == 3:
        for vec in basis:
            key = (vec.m, vec.ell, vec.tableau.second_row)
            table, norm = _GOLDEN_F[key]
            if _fig_order(vec.coordinates) != [mpq(t) for t in table]:
                failures.append("f table mismatch at %r" % (key,))
            if vec.squared_norm != norm:
                failures.append("norm column mismatch at %r" % (key,))
            g = build_g_Q(n, vec.m, vec.ell, vec.tableau)
            if _fig_order(g) != [mpq(t) for t in _GOLDEN_G[key]]:
                failures.append("g table mismatch at %r" % (key,))
    return _result("orthobasis", (n,), failures, {"vectors": len(basis)})


# ---------------------------------------------------------------------------
# lumpings

def _coordinate_subsets(n: int):
    """All proper subsets up to n = 5; a deterministic sample above."""
    if n <= 5:
        out = []
        for m in range(1, n):
            out.extend(itertools.combinations(range(1, n + 1), m))
        return out
    out = []
    for m in range(1, n):
        out.append(tuple(range(1, m + 1)))
        out.append(tuple(range(n - m + 1, n + 1)))
        out.append(tuple(range(1, n + 1, 2))[:m])
    return sorted(set(out))


def verify_lumpings(n: int, k3_max_n: int = 4) -> CheckResult:
    """Coordinate marginals equal smaller Burnside kernels, the orbit chain
    is Chebyshev-diagonalized, and the one-coordinate tensor identity holds."""
    failures = []
    kernel = build_kernel(n, 2)
    for subset in _coordinate_subsets(n):
        try:
            lump_to_coordinates(n, 2, subset, kernel=kernel)
        except AssertionError as exc:
            failures.append("k=2 subset %r: %s" % (subset, exc))
    if n <= k3_max_n:
        k3 = build_kernel(n, 3)
        for subset in _coordinate_subsets(n)[: 2 * n]:
            try:
                lump_to_coordinates(n, 3, subset, kernel=k3)
            except AssertionError as exc:
                failures.append("k=3 subset %r: %s" % (subset, exc))
    # orbit chain: direct construction agrees with the grouped kernel, and
    # the discrete Chebyshev vectors are exact eigenvectors
    orbit = orbit_kernel(n, 2)
    if lump_to_orbits(kernel).matrix != orbit.matrix:
        failures.append("direct orbit kernel disagrees with grouping")
    for m in range(n + 1):
        lam = beta(m // 2) if m % 2 == 0 else mpq(0)
        vec = [chebyshev_eval(n, m, i) for i in range(n + 1)]
        image = orbit.matrix.matvec(vec)
        if any(a != lam * b for a, b in zip(image, vec)):
            failures.append("Chebyshev degree %d is not an orbit eigenvector" % m)
    # tensor identity K_n (I x K_1) = K_{n-1} x K_1, in entry form
    if n >= 2:
        smaller = build_kernel(n - 1, 2)
        half = 1 << (n - 1)
        for x in range(1 << n):
            xr = x & (half - 1)
            row = kernel.matrix.data[x]
            small_row = smaller.matrix.data[xr]
            for yr in range(half):
                if row[yr] + row[yr | half] != small_row[yr]:
                    failures.append("tensor identity fails at x=%d, y=%d" % (x, yr))
                    break
            if failures:
                break
        if n <= 5 and not failures:
            k1 = build_kernel(1, 2)
            eye = RationalMatrix.identity(half)
            lhs = kernel.matrix.matmul(k1.matrix.kron(eye))
            rhs = k1.matrix.kron(smaller.matrix)
            if lhs != rhs:
                failures.append("matrix form of the tensor identity fails")
    return _result("lumpings", (n,), failures)


# ---------------------------------------------------------------------------
# Appendix A identities and transcribed telescoping certificates


def _supp_binom(n, k):
    """Summand convention for the certificates: zero off the support, even
    at shifted grid points with negative upper index."""
    if n < 0 or k < 0 or k > n:
        return 0
    return binomial(n, k)


def _summand_H(m, s, a, b, c):
    prefactor = (mpz(_supp_binom(m - s, a)) * _supp_binom(s, b) * _supp_binom(s, c)
                 * _supp_binom(m, a + b) * _supp_binom(m, a + c)) if m >= s >= 0 else 0
    if prefactor == 0:
        return mpq(0)
    sign = (-1) ** (b + c)
    num = (mpz(math.factorial(a + b + c)) * math.factorial(m + s - a - b - c)
           * math.factorial(m))
    den = mpz(math.factorial(s)) * math.factorial(2 * m)
    return mpq(sign * prefactor * num, den)


def _hbar(m, s):
    return sum(_summand_H(m, s, a, b, c)
               for a in range(m - s + 1)
               for b in range(s + 1)
               for c in range(s + 1))


def _ratio_Fa(m, s, a, b, c):
    num = (2*a*b*c - 2*a**2*b*c + 4*a*b*c*m - 2*a**2*b*c*m + 2*a*b*c*m**2
           + a**2*s - a**3*s - 2*a*b*s + a**2*b*s - 2*a*c*s + a**2*c*s
           - 2*a*b*c*s + 2*a**2*m*s - a**3*m*s - 4*a*b*m*s + a**2*b*m*s
           - 4*a*c*m*s + a**2*c*m*s - 2*a*b*c*m*s + a**2*m**2*s - 2*a*b*m**2*s
           - 2*a*c*m**2*s + 3*a*s**2 - 2*a**2*s**2 + a*b*s**2 + a*c*s**2
           + 6*a*m*s**2 - 2*a**2*m*s**2 + a*b*m*s**2 + a*c*m*s**2
           + 3*a*m**2*s**2 - a*s**3 - a*m*s**3)
    den = 2 * (-1 + a + b - m) * (-1 + a + c - m) * (1 + 2*m) * s * (-1 + a - m + s)
    return num, den


def _ratio_Fb(m, s, a, b, c):
    num = (-2*a*b + 2*a**2*b + 2*a*b**2 + 2*a*b*c + 2*b*m - 8*a*b*m + 4*a**2*b*m
           - 2*b**2*m + 4*a*b**2*m - 2*b*c*m + 4*a*b*c*m + 2*b**2*c*m + 4*b*m**2
           - 6*a*b*m**2 - 2*b**2*m**2 - 2*b*c*m**2 + 2*b*m**3 - b*s - a*b*s
           + b**2*s + b*c*s - 2*b*m*s - a*b*m*s + b**2*m*s + b*c*m*s - b*m**2*s
           - b*s**2 - b*m*s**2)
    den = 2 * (-1 + a + b - m) * (-1 + a + c - m) * (1 + 2*m) * s
    return num, den


def _ratio_Fc(m, s, a, b, c):
    num = (2*a*b*c - 2*b*c*m + 4*a*b*c*m + 2*b*c**2*m - 2*b*c*m**2 + c*s
           - 3*a*c*s + b*c*s - c**2*s + 4*c*m*s - 5*a*c*m*s + b*c*m*s
           - 3*c**2*m*s + 3*c*m**2*s - c*s**2 - c*m*s**2)
    den = 2 * (1 + a + b) * (-1 + a + c - m) * (1 + 2*m) * s
    return num, den


def _ratio_Ga(m, s, a, b, c):
    return a, m - s


def _ratio_Gb(m, s, a, b, c):
    num = (a*b - a**2*b - a*b**2 - a*b*c - b*m + 2*a*b*m + b**2*m + b*c*m
           - b*m**2 + b*s - b**2*s - b*c*s + b*s**2)
    den = (-1 + b - s) * (1 - c + s) * (-m + s)
    return num, den


def _ratio_Gc(m, s, a, b, c):
    num = a**2*c + a*b*c - 2*a*c*m - b*c*m + c*m**2 + a*c*s + b*c*s - c*m*s
    den = (1 + a + b) * (m - s) * (1 - c + s)
    return num, den


def _telescope_H(shift_var: str, ratios, point):
    """Check H(var+1) - H(var) equals the sum of certificate differences at
    one grid point; returns True/False or None when a denominator vanishes."""
    m, s, a, b, c = point

    def cert(ratio, pt):
        num, den = ratio(*pt)
        if den == 0:
            return None
        return mpq(num, den) * _summand_H(*pt)

    deltas = []
    for ratio, var_idx in ratios:
        up = list(point)
        up[var_idx] += 1
        hi = cert(ratio, tuple(up))
        lo = cert(ratio, point)
        if hi is None or lo is None:
            return None
        deltas.append(hi - lo)
    if shift_var == "m":
        lhs = _summand_H(m + 1, s, a, b, c) - _summand_H(m, s, a, b, c)
    else:
        lhs = _summand_H(m, s + 1, a, b, c) - _summand_H(m, s, a, b, c)
    return lhs == sum(deltas)


def _summand_P(n, m, l1, l2, i, j1, j2):
    prefactor = (mpz(_supp_binom(2*m + l1, m + j1)) * _supp_binom(2*m + l2, m + j2)
                 * _supp_binom(i, j1) * _supp_binom(i, j2)
                 * _supp_binom(n - 2*m - i, l1 - j1) * _supp_binom(n - 2*m - i, l2 - j2)
                 * _supp_binom(m + i, i) * _supp_binom(n - m - i, m))
    if prefactor == 0:
        return mpq(0)
    return mpq((-1) ** (j1 + j2) * prefactor * (l1 - l2))


def _ratio_Qi(n, m, l1, l2, i, j1, j2):
    num = (-j1 + 2*i*j1 - i**2*j1 + j2 - 2*i*j2 + i**2*j2 + 3*j1*m - 3*i*j1*m
           - 3*j2*m + 3*i*j2*m - 2*j1*m**2 + 2*j2*m**2 - 2*j1*n + 2*i*j1*n
           + 2*j2*n - 2*i*j2*n + 3*j1*m*n - 3*j2*m*n - j1*n**2 + j2*n**2)
    den = (l1 - l2) * (-1 + i - j1 + l1 + 2*m - n) * (-1 + i - j2 + l2 + 2*m - n)
    return num, den


def _ratio_Qj1(n, m, l1, l2, i, j1, j2):
    return -j1**2 - j1*m, (1 + i - j1) * (l1 - l2)


def _ratio_Qj2(n, m, l1, l2, i, j1, j2):
    return j2**2 + j2*m, (1 + i - j2) * (l1 - l2)


def _telescope_P(point):
    n = point[0]

    def cert(ratio, pt):
        num, den = ratio(*pt)
        if den == 0:
            return None
        return mpq(num, den) * _summand_P(*pt)

    deltas = []
    for ratio, var_idx in ((_ratio_Qi, 4), (_ratio_Qj1, 5), (_ratio_Qj2, 6)):
        up = list(point)
        up[var_idx] += 1
        hi = cert(ratio, tuple(up))
        lo = cert(ratio, point)
        if hi is None or lo is None:
            return None
        deltas.append(hi - lo)
    shifted = (n + 1,) + point[1:]
    lhs = _summand_P(*shifted) - _summand_P(*point)
    return lhs == sum(deltas)


def _orthogonality_triple_sum(n, m, l1, l2):
    acc = mpq(0)
    for i in range(n - 2 * m + 1):
        weight = mpq(binomial(n - 2 * m, i), binomial(n, m + i))
        for j1 in range(i + 1):
            for j2 in range(i + 1):
                term = (mpz(binomial(2*m + l1, m + j1)) * binomial(2*m + l2, m + j2)
                        * binomial(i, j1) * binomial(i, j2)
                        * binomial(n - 2*m - i, l1 - j1)
                        * binomial(n - 2*m - i, l2 - j2))
                if term:
                    acc += mpq((-1) ** (j1 + j2) * term) * weight
    return acc


def verify_identities_appendixA(max_c: int = 8, max_ms: int = 6,
                                a2_max_n: int = 10, cert_points: int = 500,
                                seed: int = 20240) -> CheckResult:
    """The binomial identity on its grid, the normalized inner-product triple
    sum H-bar = 1, the orthogonality triple sums, and the transcribed
    telescoping certificates on a random grid (zero denominators skipped)."""
    failures = []
    for c1 in range(max_c + 1):
        for c2 in range(c1 + 1):
            for c3 in range(max_c + 1):
                lhs = mpq(1, c3 + c1 + 1) * sum(
                    mpq(binomial(c3, i), binomial(c3 + c1, i + c2))
                    for i in range(c3 + 1))
                if lhs != mpq(1, (c1 + 1) * binomial(c1, c2)):
                    failures.append("identity fails at c=(%d,%d,%d)" % (c1, c2, c3))
    for m in range(max_ms + 1):
        for s in range(m + 1):
            if _hbar(m, s) != 1:
                failures.append("H-bar(%d,%d) != 1" % (m, s))
    for n in range(1, a2_max_n + 1):
        for m in range(n // 2 + 1):
            for l1 in range(n - 2 * m + 1):
                for l2 in range(l1 + 1, n - 2 * m + 1):
                    if _orthogonality_triple_sum(n, m, l1, l2) != 0:
                        failures.append(
                            "triple sum nonzero at n=%d m=%d l=(%d,%d)"
                            % (n, m, l1, l2))
    rng = random.Random(seed)
    skipped = {"F": 0, "G": 0, "Q": 0}
    checked = {"F": 0, "G": 0, "Q": 0}
    f_ratios = ((_ratio_Fa, 2), (_ratio_Fb, 3), (_ratio_Fc, 4))
    g_ratios = ((_ratio_Ga, 2), (_ratio_Gb, 3), (_ratio_Gc, 4))
    for _ in range(cert_points):
        m = rng.randint(1, 8)
        s = rng.randint(1, m)
        point = (m, s, rng.randint(0, m - s + 1), rng.randint(0, s + 1),
                 rng.randint(0, s + 1))
        for tag, shift, ratios in (("F", "m", f_ratios), ("G", "s", g_ratios)):
            outcome = _telescope_H(shift, ratios, point)
            if outcome is None:
                skipped[tag] += 1
            else:
                checked[tag] += 1
                if not outcome:
                    failures.append("%s certificate fails at %r" % (tag, point))
        n = rng.randint(4, 10)
        m = rng.randint(0, (n - 2) // 2)
        l1, l2 = rng.sample(range(n - 2 * m + 1), 2)
        i = rng.randint(0, n - 2 * m)
        point = (n, m, l1, l2, i, rng.randint(0, i), rng.randint(0, i))
        outcome = _telescope_P(point)
        if outcome is None:
            skipped["Q"] += 1
        else:
            checked["Q"] += 1
            if not outcome:
                failures.append("Q certificate fails at %r" % (point,))
    return _result("appendix_a", (max_c, max_ms, a2_max_n, cert_points),
                   failures, {"certificate_points": checked,
                              "skipped_zero_denominator": skipped})


# ---------------------------------------------------------------------------
# Johnson-scheme Gram spectrum


def _johnson_eigenvalue(n, m, t):
    acc = mpq(0)
    for ell in range(m + 1):
        inner = sum(mpq((-1) ** (t - i)) * binomial(m - i, ell - i)
                    * binomial(n - m + i - t, m - ell + i - t) * binomial(t, i)
                    for i in range(t + 1))
        acc += inner * mpq(1, binomial(2 * m + 1 - ell, m + 1))
    return acc


def verify_johnson_gram(n: int, m: int) -> CheckResult:
    """Gram matrix of the normalized subset eigenvectors: entries match the
    closed form (cross-checked by direct state sums when cheap), and each
    Johnson-scheme eigenvalue appears with multiplicity C(n,t) - C(n,t-1)."""
    if m % 2:
        raise ValueError("subset eigenvectors need even |S|")
    failures = []
    subsets = list(itertools.combinations(range(1, n + 1), m))
    if len(subsets) > 220:
        raise ValueError("Gram matrix capped near 200 rows")
    gram = RationalMatrix([[gram_normalized(sa, sb) for sb in subsets]
                           for sa in subsets])
    if n <= 5:
        weights = pi_weights(n)
        self_inner = subset_self_inner(m)
        for ia, sa in enumerate(subsets):
            va = subset_vector(n, sa)
            for ib in range(ia, len(subsets)):
                direct = inner_product(va, subset_vector(n, subsets[ib]), weights)
                if direct != gram[ia, ib] * self_inner:
                    failures.append("Gram entry mismatch at %r, %r"
                                    % (sa, subsets[ib]))
        if inner_product(subset_vector(n, subsets[0]),
                         subset_vector(n, subsets[0]), weights) != self_inner:
            failures.append("self inner product differs from C(2m,m)/(m+1)")
    if rational_rank(gram) != len(subsets):
        failures.append("Gram matrix is singular; vectors not independent")
    by_value = {}
    for t in range(m + 1):
        lam = _johnson_eigenvalue(n, m, t)
        by_value.setdefault(lam, 0)
        by_value[lam] += binomial(n, t) - binomial(n, t - 1)
    mults = {}
    for lam, expected in by_value.items():
        nullity = len(subsets) - rational_rank(gram.sub_scaled_identity(lam))
        mults[str(lam)] = nullity
        if nullity != expected:
            failures.append("Gram eigenvalue %s has multiplicity %d, expected %d"
                            % (lam, nullity, expected))
    return _result("johnson_gram", (n, m), failures, {"multiplicities": mults})


# ---------------------------------------------------------------------------
# the p+/p-/p+h expansion (universal enveloping algebra conjecture)


def _expansion_coefficient(y: int, z: int):
    if y < 0 or z < 0 or y % 2 or z % 2:
        return mpq(0)
    num = mpz(math.factorial(y)) * math.factorial(z)
    den = (mpz(math.factorial(y // 2)) * math.factorial(z // 2)
           * math.factorial((y + z) // 2) * mpz(2) ** (y + z))
    return mpq(num, den) ** 2


_HALF = mpq(1, 2)
_P_MATS = (
    ((_HALF, _HALF), (_HALF, _HALF)),      # p+
    ((_HALF, -_HALF), (-_HALF, _HALF)),    # p-
    ((_HALF, -_HALF), (_HALF, -_HALF)),    # p+ h
)


def _expansion_entry(n, n00, n01, n10, n11):
    """Entry of sum c_{y,z} f(x,y,z) on a pair class, via the per-coordinate
    trinomial generating function: the letter signs are (1 + s1 u + s2 v)
    with s1 the p- sign (by x_i = y_i) and s2 the p+h sign (by y_i)."""
    poly = {(0, 0): mpq(1)}
    for count, (s1, s2) in ((n00, (1, 1)), (n01, (-1, -1)),
                            (n10, (-1, 1)), (n11, (1, -1))):
        for _ in range(count):
            nxt = {}
            for (dy, dz), val in poly.items():
                for (ey, ez, sv) in ((0, 0, 1), (1, 0, s1), (0, 1, s2)):
                    key = (dy + ey, dz + ez)
                    nxt[key] = nxt.get(key, mpq(0)) + val * sv
            poly = nxt
    acc = mpq(0)
    for (y, z), coef in poly.items():
        c = _expansion_coefficient(y, z)
        if c:
            acc += c * coef
    return acc / mpz(2) ** n


def _expansion_matrix_bruteforce(n: int) -> RationalMatrix:
    size = 1 << n
    data = [[mpq(0)] * size for _ in range(size)]
    for word in itertools.product(range(3), repeat=n):
        c = _expansion_coefficient(word.count(1), word.count(2))
        if c == 0:
            continue
        mats = [_P_MATS[w] for w in word]
        for x in range(size):
            xd = [(x >> i) & 1 for i in range(n)]
            for y in range(size):
                yd = [(y >> i) & 1 for i in range(n)]
                value = c
                for i in range(n):
                    value *= mats[i][xd[i]][yd[i]]
                data[x][y] += value
    return RationalMatrix(data)


def verify_pplus_conjecture(n: int) -> CheckResult:
    """sum_{x+y+z=n} c_{y,z} f(x,y,z) equals K_n exactly.  f(x,y,z) sums
    the tensor products over all distinct letter orders; entries are
    evaluated per pair class through the trinomial generating function,
    which is cross-checked against brute-force word enumeration at n <= 3."""
    failures = []
    if n <= 3:
        brute = _expansion_matrix_bruteforce(n)
        kernel = build_kernel(n, 2)
        if brute != kernel.matrix:
            failures.append("brute-force expansion differs from K_%d" % n)
        for x in range(1 << n):
            for y in range(1 << n):
                n11 = bin(x & y).count("1")
                n10 = bin(x & ~y & ((1 << n) - 1)).count("1")
                n01 = bin(~x & y & ((1 << n) - 1)).count("1")
                entry = _expansion_entry(n, n - n11 - n10 - n01, n01, n10, n11)
                if entry != brute[x, y]:
                    failures.append("generating-function entry differs from "
                                    "brute force at (%d,%d)" % (x, y))
    for n00 in range(n + 1):
        for n01 in range(n - n00 + 1):
            for n10 in range(n - n00 - n01 + 1):
                n11 = n - n00 - n01 - n10
                expansion = _expansion_entry(n, n00, n01, n10, n11)
                closed = _entry_from_counts(2, (n00, n01, n10, n11))
                if expansion != closed:
                    failures.append("expansion differs from K on class %r"
                                    % ((n00, n01, n10, n11),))
    if n == 4:
        printed = {(0, 0): mpq(1), (2, 0): mpq(1, 4), (0, 2): mpq(1, 4),
                   (4, 0): mpq(9, 64), (0, 4): mpq(9, 64), (2, 2): mpq(1, 64)}
        for (y, z), value in printed.items():
            if _expansion_coefficient(y, z) != value:
                failures.append("c_{%d,%d} differs from the printed value" % (y, z))
    return _result("pplus_expansion", (n,), failures)


# ---------------------------------------------------------------------------
# eigenvalue multiplicities for k >= 3

_DIRECT_RANK_LIMIT = 100


def _modp_shifted_kernel(n: int, k: int, lam, p: int) -> np.ndarray:
    class_index, profiles = pair_class_matrix(n, k)
    values = np.array([modp_value(_entry_from_counts(k, prof), p)
                       for prof in profiles], dtype=np.int64)
    a = values[class_index]
    d = np.arange(k ** n)
    a[d, d] = (a[d, d] - modp_value(lam, p)) % p
    return a


def _state_permutation(n: int, k: int, sigma: Sequence[int]) -> np.ndarray:
    """Index map x -> sigma(x), where sigma(x)_{sigma(i)} = x_i (1-based)."""
    size = k ** n
    t = np.arange(size, dtype=np.int64)
    out = np.zeros(size, dtype=np.int64)
    for i, target in enumerate(sigma):
        digit = (t // (k ** i)) % k
        out += digit * (k ** (target - 1))
    return out


def _lumped_multiplicity(n: int, k: int, lam) -> int:
    orbit = orbit_kernel(n, k)
    shifted = orbit.matrix.sub_scaled_identity(lam)
    return orbit.size - rational_rank(shifted)


def verify_ck_multiplicities(k: int, n: int, target,
                             expected: Optional[int] = None,
                             base_n: int = None,
                             p: int = (1 << 31) - 1) -> CheckResult:
    """Exact multiplicity of a rational eigenvalue of the C_k^n chain.

    Small state spaces use fraction-free rank directly.  Larger ones use a
    two-sided certificate: eigenvectors of a small base chain are lifted
    through every coordinate subset (the coordinate-marginal equality is
    verified exactly for the base subset, and the kernel's invariance under
    the lifting permutations is verified exactly on the pair-class table),
    which pins the multiplicity from below; the rank of K - lambda I over
    F_p pins it from above.  The two must meet, making the count exact.
    """
    target = mpq(target)
    failures = []
    details = {"target": str(target)}
    size = k ** n
    details["lumped_multiplicity"] = _lumped_multiplicity(n, k, target)
    if size <= _DIRECT_RANK_LIMIT:
        kernel = build_kernel(n, k)
        shifted = kernel.matrix.sub_scaled_identity(target)
        mult = size - rational_rank(shifted)
        details["multiplicity"] = mult
        details["method"] = "fraction-free rank"
        basis = rational_nullspace(shifted)
        if len(basis) != mult:
            failures.append("nullspace dimension %d disagrees with rank %d"
                            % (len(basis), mult))
        for vec in basis:
            image = kernel.matrix.matvec(vec)
            if any(a != target * b for a, b in zip(image, vec)):
                failures.append("nullspace vector fails the eigen-equation")
        if expected is not None and mult != expected:
            failures.append("multiplicity %d differs from expected %d"
                            % (mult, expected))
        return _result("ck_multiplicity", (k, n, str(target)), failures, details)

    if base_n is None:
        base_n = 1
        while k ** (base_n + 1) <= _DIRECT_RANK_LIMIT and base_n + 1 < n:
            base_n += 1
        while base_n >= 1:
            base_kernel = build_kernel(base_n, k)
            base_vectors = rational_nullspace(
                base_kernel.matrix.sub_scaled_identity(target))
            if base_vectors:
                break
            base_n -= 1
        if base_n == 0:
            return _result("ck_multiplicity", (k, n, str(target)),
                           ["eigenvalue absent from every tractable base chain"],
                           details)
    else:
        base_kernel = build_kernel(base_n, k)
        base_vectors = rational_nullspace(
            base_kernel.matrix.sub_scaled_identity(target))
    base_size = k ** base_n
    for vec in base_vectors:
        image = base_kernel.matrix.matvec(vec)
        if any(a != target * b for a, b in zip(image, vec)):
            failures.append("base eigenvector fails its eigen-equation")
    details["base_n"] = base_n
    details["base_dimension"] = len(base_vectors)

    # exact coordinate-marginal equality for the base subset {1..base_n}:
    # row sums of K into each fiber must reproduce the base kernel row
    class_index, profiles = pair_class_matrix(n, k)
    values = [_entry_from_counts(k, prof) for prof in profiles]
    fiber = np.arange(size, dtype=np.int64) % base_size
    for x in range(size):
        codes = class_index[x].astype(np.int64) * base_size + fiber
        uniq, counts = np.unique(codes, return_counts=True)
        sums = [mpq(0)] * base_size
        for code, count in zip(uniq.tolist(), counts.tolist()):
            sums[code % base_size] += int(count) * values[code // base_size]
        if sums != base_kernel.matrix.data[x % base_size]:
            failures.append("coordinate marginal fails at state %d" % x)
            break

    # lifted vectors for every base_n-subset, via verified symmetries
    stack_rows = []
    for subset in itertools.combinations(range(1, n + 1), base_n):
        rest = [i for i in range(1, n + 1) if i not in subset]
        sigma = list(subset) + rest
        perm = _state_permutation(n, k, sigma)
        if not np.array_equal(class_index[perm][:, perm], class_index):
            failures.append("kernel not invariant under lift permutation %r"
                            % (subset,))
            break
        for vec in base_vectors:
            lifted = np.zeros(size, dtype=object)
            base_vals = np.array([int(v) for v in vec], dtype=object)
            lifted[perm] = base_vals[np.arange(size) % base_size]
            stack_rows.append(lifted)
    expected = len(base_vectors) * binomial(n, base_n)
    details["lifted_vectors"] = len(stack_rows)
    stack_modp = np.array(
        [[int(x) % p for x in row] for row in stack_rows], dtype=np.int64)
    stack_rank = modp_rank(stack_modp, p)
    if stack_rank != expected:
        failures.append("lifted family has F_p rank %d, expected %d"
                        % (stack_rank, expected))
    nullity_upper = size - modp_rank(_modp_shifted_kernel(n, k, target, p), p)
    details["nullity_upper_bound"] = nullity_upper
    details["nullity_lower_bound"] = stack_rank
    details["method"] = "lifted eigenvectors + F_p rank certificate"
    if nullity_upper != stack_rank:
        failures.append("certificates do not meet: lower %d, upper %d"
                        % (stack_rank, nullity_upper))
    else:
        details["multiplicity"] = stack_rank
        if expected is not None and stack_rank != expected:
            failures.append("multiplicity %d differs from expected %d"
                            % (stack_rank, expected))
    return _result("ck_multiplicity", (k, n, str(target)), failures, details)


def survey_spectrum(n: int, k: int, tol: float = 1e-9) -> CheckResult:
    """Double-precision spectrum of the pi-symmetrized kernel, clustered at
    tol; clustered values that reconstruct to small rationals are confirmed
    by exact rank.  Tolerance-tagged, not exact."""
    kernel = build_kernel(n, k)
    size = kernel.size
    pi = np.array([float(p) for p in kernel.stationary])
    kmat = np.array([[float(v) for v in row] for row in kernel.matrix.data])
    sym = np.sqrt(pi)[:, None] * kmat / np.sqrt(pi)[None, :]
    eigs = np.linalg.eigvalsh((sym + sym.T) / 2)
    eigs = np.sort(eigs)[::-1]
    clusters = []
    for value in eigs:
        if clusters and abs(value - clusters[-1][0]) <= tol:
            center, count = clusters[-1]
            clusters[-1] = ((center * count + value) / (count + 1), count + 1)
        else:
            clusters.append((value, 1))
    ambiguous = any(abs(a[0] - b[0]) <= 10 * tol
                    for a, b in zip(clusters, clusters[1:]))
    confirmed = {}
    for center, count in clusters:
        guess = Fraction(center).limit_denominator(10 ** 6)
        if abs(float(guess) - center) <= 10 * tol and size <= _DIRECT_RANK_LIMIT:
            lam = mpq(guess.numerator, guess.denominator)
            nullity = size - rational_rank(kernel.matrix.sub_scaled_identity(lam))
            if nullity == count:
                confirmed[str(lam)] = count
    details = {
        "clusters": [(float(c), m) for c, m in clusters],
        "tolerance": tol,
        "ambiguous": ambiguous,
        "rank_confirmed": confirmed,
    }
    witness = "cluster ambiguity at tolerance %g" % tol if ambiguous else None
    return CheckResult("spectrum_survey", (n, k), "pass", witness, details)


# ---------------------------------------------------------------------------
# section 2.2 statistics identities


def verify_statistics_identities(n: int) -> CheckResult:
    """Pointwise product identities of the pair eigenvectors, the alternation
    expansion, and the pair covariance value under pi."""
    if n < 4:
        raise ValueError("the four-index identity needs n >= 4")
    failures = []
    size = 1 << n
    vectors = {}
    for pair in itertools.combinations(range(1, n + 1), 2):
        vectors[pair] = subset_vector(n, pair)

    def pair_vec(a, b):
        return vectors[(min(a, b), max(a, b))]

    quads = list(itertools.combinations(range(1, n + 1), 4))
    for a, b, c, d in quads:
        f4 = subset_vector(n, (a, b, c, d))
        ab, cd = pair_vec(a, b), pair_vec(c, d)
        for x in range(size):
            lhs = ab[x] * cd[x]
            rhs = (mpq(18, 35) * f4[x]
                   - mpq(2, 7) * (ab[x] + cd[x])
                   + mpq(3, 14) * (pair_vec(a, c)[x] + pair_vec(a, d)[x]
                                   + pair_vec(b, c)[x] + pair_vec(b, d)[x])
                   + mpq(1, 5))
            if lhs != rhs:
                failures.append("quad identity fails at %r, state %d"
                                % ((a, b, c, d), x))
                break
    for a, b, c in itertools.permutations(range(1, n + 1), 3):
        if b > c:
            continue
        ab, ac, bc = pair_vec(a, b), pair_vec(a, c), pair_vec(b, c)
        for x in range(size):
            lhs = ab[x] * ac[x]
            rhs = mpq(3, 2) * bc[x] - mpq(1, 2) * (ab[x] + ac[x]) + mpq(1, 2)
            if lhs != rhs:
                failures.append("triple identity fails at %r, state %d"
                                % ((a, b, c), x))
                break
    for pair, vec in vectors.items():
        for x in range(size):
            if vec[x] * vec[x] != -vec[x] + 2:
                failures.append("square identity fails at %r" % (pair,))
                break
    # alternation expansion and pair covariance under pi
    weights = pi_weights(n)
    for x in range(size):
        digits = [(x >> i) & 1 for i in range(n)]
        t_count = sum(1 for u, v in zip(digits, digits[1:]) if u != v)
        expansion = mpq(n - 1, 3) - mpq(1, 3) * sum(
            pair_vec(i, i + 1)[x] for i in range(1, n))
        if t_count != expansion:
            failures.append("alternation expansion fails at state %d" % x)
            break
        for i in range(1, n):
            indicator = 1 if digits[i - 1] != digits[i] else 0
            if mpq(indicator) != (1 - pair_vec(i, i + 1)[x]) / 3:
                failures.append("indicator identity fails at state %d" % x)
                break
    for i, j in itertools.combinations(range(1, n + 1), 2):
        cov = sum(weights[x] * (mpq((x >> (i - 1)) & 1) - mpq(1, 2))
                  * (mpq((x >> (j - 1)) & 1) - mpq(1, 2))
                  for x in range(size))
        if cov != mpq(1, 12):
            failures.append("pair covariance under pi is %s, expected 1/12" % cov)
            break
    return _result("statistics_identities", (n,), failures)


# ---------------------------------------------------------------------------
# suite runner

SUITES = ("all", "eigen", "basis", "lumpings", "appendix-a", "johnson",
          "pplus", "ck", "stats")


def run_suite(suite: str = "all", max_n: int = 6) -> list:
    """Execute a named suite; results are ordered by (name, params)."""
    if suite not in SUITES:
        raise ValueError("unknown suite %r; choose from %s" % (suite, SUITES))
    jobs = []
    if suite in ("all", "eigen"):
        for n in range(1, min(max_n, 8) + 1):
            jobs.append(lambda n=n: verify_eigenstructure(n))
    if suite in ("all", "basis"):
        for n in range(2, min(max_n, 7) + 1):
            jobs.append(lambda n=n: verify_orthobasis(n))
    if suite in ("all", "lumpings"):
        for n in range(2, min(max_n, 8) + 1):
            jobs.append(lambda n=n: verify_lumpings(n))
    if suite in ("all", "appendix-a"):
        jobs.append(lambda: verify_identities_appendixA())
    if suite in ("all", "johnson"):
        pairs = [(4, 2), (5, 2), (6, 2), (7, 2), (8, 4)]
        for n, m in pairs:
            if n <= max_n + 2:
                jobs.append(lambda n=n, m=m: verify_johnson_gram(n, m))
    if suite in ("all", "pplus"):
        for n in range(1, min(max_n, 8) + 1):
            jobs.append(lambda n=n: verify_pplus_conjecture(n))
    if suite in ("all", "ck"):
        jobs.append(lambda: verify_ck_multiplicities(2, 5, beta(1),
                                                     expected=binomial(5, 2)))
        top = min(max_n, 7)
        for n in range(3, top + 1):
            expected = 2 * binomial(n, 4)
            jobs.append(lambda n=n, e=expected:
                        verify_ck_multiplicities(3, n, mpq(1, 18), expected=e))
    if suite in ("all", "stats"):
        for n in (4, 5):
            jobs.append(lambda n=n: verify_statistics_identities(n))
    results = [job() for job in jobs]
    results.sort(key=lambda r: (r.name, r.params))
    return results
