"""Eigen-structure of the binary Burnside chain.

Two bases are built here.  The subset vectors f_S(x) = (-1)^{|x_S|} C(|S|,
|x_S|) diagonalize the chain but are not orthogonal; the orthogonal family
f_Q^{m,l} indexed by two-row standard Young tableaux Q fixes that.  The
construction is:

  * seed vectors g_T^{m,i} = (v01 - v10)^{tensor m} (x) sum of level-i basis
    vectors on the trailing n-2m coordinates, for T the column reading
    tableau of shape (n-m, m);
  * level coefficients T_{m,n}^{(l)}(i), values of (m,m)-Hahn polynomials up
    to normalization, combine the seeds into f_T^{m,l};
  * words in the intertwiners tau_j = s_j + 1/(M_j - M_{j+1}) transport the
    column reading tableau to any other standard tableau Q of the shape.

Vectors are dense length-2^n coordinate lists over exact rationals, indexed
by little-endian state index.  Jucys-Murphy operators M_r act by summing
coordinate transpositions s_{tr}, t < r.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from gmpy2 import mpq, mpz

from .chain import Kernel, State
from .exactcore import Rational, binomial, rising_factorial

__all__ = [
    "beta",
    "Eigenvalue",
    "f_subset_eval",
    "subset_vector",
    "subset_self_inner",
    "gram_normalized",
    "chebyshev_eval",
    "hahn_eval",
    "t_scalar",
    "Tableau",
    "enumerate_tableaux",
    "column_reading_tableau",
    "tableau_count",
    "jm_apply",
    "tau_apply",
    "SingularTauError",
    "gamma_Q",
    "norm_f_Q",
    "build_g_Q",
    "build_f_Q",
    "OrthoVector",
    "build_basis",
    "basis_records",
    "phi_expand",
    "multiplicity_table",
    "pi_weights",
    "inner_product",
]


@lru_cache(maxsize=None)
def beta(k: int) -> Rational:
    """Nonzero eigenvalues of the binary chain: C(2k,k)^2 / 2^(4k)."""
    if k < 0:
        raise ValueError("beta index must be >= 0")
    return mpq(binomial(2 * k, k) ** 2, mpz(2) ** (4 * k))


@dataclass(frozen=True)
class Eigenvalue:
    """An eigenvalue together with its k-index; k_index None marks zero."""

    value: Rational
    k_index: Optional[int]

    @classmethod
    def nonzero(cls, k: int) -> "Eigenvalue":
        return cls(beta(k), k)

    @classmethod
    def zero(cls) -> "Eigenvalue":
        return cls(mpq(0), None)


def f_subset_eval(subset, x: State) -> Rational:
    """f_S(x) = (-1)^{|x_S|} C(|S|, |x_S|) for binary states."""
    if x.k != 2:
        raise ValueError("subset eigenvectors are the k = 2 family")
    ones = sum(x.digits[s - 1] for s in subset)
    return mpq((-1) ** ones * binomial(len(subset), ones))


def subset_vector(n: int, subset) -> list:
    """Dense coordinates of f_S over all 2^n states."""
    mask = 0
    for s in subset:
        if not 1 <= s <= n:
            raise ValueError("subset coordinate out of range")
        mask |= 1 << (s - 1)
    m = len(subset)
    out = []
    for x in range(1 << n):
        ones = bin(x & mask).count("1")
        out.append(mpq((-1) ** ones * binomial(m, ones)))
    return out


def subset_self_inner(m: int) -> Rational:
    """<f_S, f_S>_pi = C(2m,m)/(m+1) for |S| = m even (n-independent)."""
    return mpq(binomial(2 * m, m), m + 1)


def gram_normalized(subset_a, subset_b) -> Rational:
    """Normalized inner product of subset eigenvectors.

    For |S| = |S'| = m even with overlap t = |S cap S'| this is
    1 / C(2m+1-t, m+1); subsets of different sizes are orthogonal because
    the vectors live in different gradings, so the value is 0.
    """
    sa, sb = set(subset_a), set(subset_b)
    if len(sa) != len(sb):
        return mpq(0)
    m = len(sa)
    if m % 2:
        raise ValueError("normalized Gram entries are defined for even sizes")
    t = len(sa & sb)
    return mpq(1, binomial(2 * m + 1 - t, m + 1))


def chebyshev_eval(n: int, m: int, i: int) -> Rational:
    """Degree-m discrete Chebyshev polynomial on {0..n} at i, by the
    three-term recurrence (exact rationals, no normalization surprises)."""
    if not (0 <= m <= n and 0 <= i <= n):
        raise ValueError("need 0 <= m <= n and 0 <= i <= n")
    prev = mpq(1)
    if m == 0:
        return prev
    cur = mpq(n - 2 * i, n)
    for j in range(1, m):
        nxt = ((2 * j + 1) * (n - 2 * i) * cur - j * (j + n + 1) * prev)
        nxt /= (j + 1) * (n - j)
        prev, cur = cur, nxt
    return cur


def hahn_eval(n: int, alpha, beta_param, ell: int, i: int) -> Rational:
    """(alpha, beta)-Hahn polynomial Q^ell on {0..n} at i, normalized so the
    value at 0 is 1; evaluated by the terminating hypergeometric sum."""
    alpha = mpq(alpha)
    beta_param = mpq(beta_param)
    if alpha <= -1 or beta_param <= -1:
        raise ValueError("Hahn parameters must exceed -1")
    if not (0 <= ell <= n and 0 <= i <= n):
        raise ValueError("need 0 <= ell <= n and 0 <= i <= n")
    acc = mpq(0)
    for k in range(0, min(ell, i) + 1):
        num = (rising_factorial(-ell, k) * rising_factorial(ell + alpha + beta_param + 1, k)
               * rising_factorial(-i, k))
        den = (rising_factorial(alpha + 1, k) * rising_factorial(-n, k)
               * math.factorial(k))
        acc += num / den
    return acc


def t_scalar(m: int, n: int, ell: int, i: int) -> Rational:
    """Level coefficients of the orthogonal family, by the casework sum
    sum_j (-1)^(m+j) C(2m+l, m+j) C(i, j) C(n-2m-i, l-j)."""
    if not (0 <= m <= n // 2):
        raise ValueError("need 0 <= m <= n/2")
    if not (0 <= ell <= n - 2 * m and 0 <= i <= n - 2 * m):
        raise ValueError("need 0 <= ell, i <= n - 2m")
    acc = 0
    for j in range(0, i + 1):
        acc += ((-1) ** (m + j) * binomial(2 * m + ell, m + j)
                * binomial(i, j) * binomial(n - 2 * m - i, ell - j))
    return mpq(acc)


@dataclass(frozen=True)
class Tableau:
    """Standard Young tableau of two-row shape (n-m, m), stored by its
    second-row entries a_1 < ... < a_m (standardness forces a_r >= 2r)."""

    n: int
    second_row: tuple

    def __post_init__(self):
        sr = self.second_row
        m = len(sr)
        if m > self.n // 2:
            raise ValueError("second row longer than n/2")
        for r, a in enumerate(sr, start=1):
            if a < 2 * r or a > self.n:
                raise ValueError("entry %d at position %d violates standardness" % (a, r))
            if r > 1 and a <= sr[r - 2]:
                raise ValueError("second row must increase")

    @property
    def m(self) -> int:
        return len(self.second_row)

    def content(self, r: int) -> int:
        """Column minus row of the box holding r."""
        if r in self.second_row:
            return self.second_row.index(r) + 1 - 2
        first_row_position = r - sum(1 for a in self.second_row if a <= r)
        return first_row_position - 1

    def swap(self, j: int) -> "Tableau":
        """Exchange the labels j and j+1."""
        sr = tuple(j + 1 if a == j else (j if a == j + 1 else a)
                   for a in self.second_row)
        return Tableau(self.n, tuple(sorted(sr)))

    def is_column_reading(self) -> bool:
        return all(a == 2 * r for r, a in enumerate(self.second_row, start=1))


def column_reading_tableau(n: int, m: int) -> Tableau:
    return Tableau(n, tuple(2 * r for r in range(1, m + 1)))


def tableau_count(n: int, m: int) -> int:
    return binomial(n, m) - binomial(n, m - 1)


def enumerate_tableaux(n: int, m: int) -> list:
    """All standard two-row tableaux of shape (n-m, m), column reading
    tableau first, then lexicographic by second row."""
    if m > n // 2:
        raise ValueError("need m <= n/2")
    rows = [sr for sr in itertools.combinations(range(1, n + 1), m)
            if all(a >= 2 * r for r, a in enumerate(sr, start=1))]
    rows.sort()
    out = [Tableau(n, sr) for sr in rows]
    col = column_reading_tableau(n, m)
    out.remove(col)
    out.insert(0, col)
    if len(out) != tableau_count(n, m):
        raise AssertionError("tableau enumeration does not match the count")
    return out


def _swap_index_table(n: int, j: int) -> list:
    """State-index permutation induced by transposing coordinates j, j+1."""
    size = 1 << n
    lo, hi = 1 << (j - 1), 1 << j
    table = []
    for x in range(size):
        b1, b2 = x & lo, x & hi
        if bool(b1) != bool(b2):
            x ^= lo | hi
        table.append(x)
    return table


def _apply_transposition(v: Sequence, n: int, a: int, b: int) -> list:
    """s_{ab} acting on functions: (s v)(x) = v(x with coords a, b swapped)."""
    size = 1 << n
    la, lb = 1 << (a - 1), 1 << (b - 1)
    out = [None] * size
    for x in range(size):
        y = x
        if bool(x & la) != bool(x & lb):
            y = x ^ (la | lb)
        out[x] = v[y]
    return out


def jm_apply(r: int, v: Sequence) -> list:
    """Jucys-Murphy element M_r = sum_{t<r} s_{tr} applied to a dense vector
    over C_2^n (n inferred from the length)."""
    size = len(v)
    n = size.bit_length() - 1
    if 1 << n != size:
        raise ValueError("vector length must be a power of two")
    if not 2 <= r <= n:
        raise ValueError("need 2 <= r <= n")
    out = [mpq(0)] * size
    for t in range(1, r):
        sv = _apply_transposition(v, n, t, r)
        out = [a + b for a, b in zip(out, sv)]
    return out


class SingularTauError(ZeroDivisionError):
    """tau_j is undefined when adjacent contents coincide."""


def tau_apply(j: int, v: Sequence, tableau: Tableau) -> list:
    """tau_j v = s_j v + v / (ct(Q(j)) - ct(Q(j+1))) for v in V_Q."""
    d = tableau.content(j) - tableau.content(j + 1)
    if d == 0:
        raise SingularTauError("equal contents at %d, %d in %r" % (j, j + 1, tableau))
    size = len(v)
    n = size.bit_length() - 1
    sv = _apply_transposition(v, n, j, j + 1)
    inv = mpq(1, d)
    return [a + b * inv for a, b in zip(sv, v)]


def _tau_word(v: list, tableau: Tableau) -> list:
    """Transport v from the column reading tableau's eigenspace to Q's,
    applying stages r = m..1, each tau_{2r}, ..., tau_{a_r - 1} in order."""
    n, m = tableau.n, tableau.m
    current = column_reading_tableau(n, m)
    for r in range(m, 0, -1):
        target = tableau.second_row[r - 1]
        for j in range(2 * r, target):
            v = tau_apply(j, v, current)
            current = current.swap(j)
    if current != tableau:
        raise AssertionError("tau word did not reach the target tableau")
    return v


def _g_seed(n: int, m: int, i: int) -> list:
    """g_T^{m,i}: signed pair tensor on the first 2m coordinates times the
    level-i symmetric sum on the rest."""
    size = 1 << n
    v = [mpq(0)] * size
    for choice in range(1 << m):
        head = 0
        sign = 1
        for t in range(m):
            if (choice >> t) & 1:
                head |= 1 << (2 * t)      # v10 on the pair, sign -1
                sign = -sign
            else:
                head |= 1 << (2 * t + 1)  # v01 on the pair
        for tail in itertools.combinations(range(n - 2 * m), i):
            idx = head
            for c in tail:
                idx |= 1 << (2 * m + c)
            v[idx] += sign
    return v


def build_g_Q(n: int, m: int, i: int, tableau: Tableau) -> list:
    """Dense coordinates of g_Q^{m,i} (simultaneous JM eigenvector at
    level m+i, contents those of Q)."""
    if tableau.n != n or tableau.m != m:
        raise ValueError("tableau shape does not match (n, m)")
    if not 0 <= i <= n - 2 * m:
        raise ValueError("need 0 <= i <= n - 2m")
    return _tau_word(_g_seed(n, m, i), tableau)


def gamma_Q(tableau: Tableau) -> Rational:
    """Norm transport factor: product over tau steps of (d^2 - 1)/d^2."""
    out = mpq(1)
    for r, a in enumerate(tableau.second_row, start=1):
        for d in range(2, a - 2 * r + 2):
            out *= mpq(d * d - 1, d * d)
    return out


def norm_f_Q(n: int, m: int, ell: int, tableau: Tableau) -> Rational:
    """Closed-form squared norm <f_Q^{m,l}, f_Q^{m,l}>_pi."""
    if tableau.n != n or tableau.m != m:
        raise ValueError("tableau shape does not match (n, m)")
    if not 0 <= ell <= n - 2 * m:
        raise ValueError("need 0 <= ell <= n - 2m")
    value = gamma_Q(tableau) * mpq(mpz(2) ** m, n + 1)
    value *= mpq(math.factorial(2 * m + ell),
                 (2 * m + 2 * ell + 1) * math.factorial(m + ell) ** 2
                 * math.factorial(ell))
    value *= mpq(math.factorial(n - 2 * m), math.factorial(n))
    value *= mpq(math.factorial(n + ell + 1), math.factorial(n - 2 * m - ell))
    return value


@dataclass(frozen=True)
class OrthoVector:
    """One member f_Q^{m,l} of the orthogonal eigenbasis."""

    n: int
    m: int
    ell: int
    tableau: Tableau
    coordinates: tuple
    eigenvalue: Eigenvalue
    squared_norm: Rational

    def eval_state(self, x: State) -> Rational:
        return self.coordinates[x.index()]


def build_f_Q(n: int, m: int, ell: int, tableau: Tableau,
              check_kernel: Optional[Kernel] = None) -> OrthoVector:
    """Exact coordinates of f_Q^{m,l}, its eigenvalue, and its squared norm.

    When a kernel is supplied the eigen-equation K f = beta f is asserted
    exactly instead of being deferred to the verifier.
    """
    if tableau.n != n or tableau.m != m:
        raise ValueError("tableau shape does not match (n, m)")
    if not 0 <= ell <= n - 2 * m:
        raise ValueError("need 0 <= ell <= n - 2m")
    size = 1 << n
    f_col = [mpq(0)] * size
    for i in range(n - 2 * m + 1):
        coef = t_scalar(m, n, ell, i)
        if coef == 0:
            continue
        seed = _g_seed(n, m, i)
        for x in range(size):
            if seed[x]:
                f_col[x] += coef * seed[x]
    coords = _tau_word(f_col, tableau)
    if (m + ell) % 2 == 0:
        eig = Eigenvalue.nonzero((m + ell) // 2)
    else:
        eig = Eigenvalue.zero()
    vec = OrthoVector(n=n, m=m, ell=ell, tableau=tableau,
                      coordinates=tuple(coords), eigenvalue=eig,
                      squared_norm=norm_f_Q(n, m, ell, tableau))
    if check_kernel is not None:
        kf = check_kernel.matrix.matvec(list(vec.coordinates))
        if any(a != eig.value * b for a, b in zip(kf, vec.coordinates)):
            raise AssertionError("eigen-equation failed for %r" % (vec.tableau,))
    return vec


def build_basis(n: int, check_kernel: Optional[Kernel] = None) -> list:
    """The full orthogonal eigenbasis, ordered by (m, ell, second row)."""
    out = []
    for m in range(n // 2 + 1):
        tableaux = sorted(enumerate_tableaux(n, m), key=lambda t: t.second_row)
        for ell in range(n - 2 * m + 1):
            for tab in tableaux:
                out.append(build_f_Q(n, m, ell, tab, check_kernel=check_kernel))
    if len(out) != 1 << n:
        raise AssertionError("basis size is not 2^n")
    return out


def phi_expand(g_coords: Sequence) -> list:
    """The S_n-module isomorphism Phi sending v_S to f_S, applied to a dense
    vector; used to cross-check f_Q^{m,l} = Phi(g_Q^{m,l})."""
    size = len(g_coords)
    n = size.bit_length() - 1
    out = [mpq(0)] * size
    for s_mask in range(size):
        c = g_coords[s_mask]
        if c == 0:
            continue
        m = bin(s_mask).count("1")
        for x in range(size):
            ones = bin(x & s_mask).count("1")
            out[x] += c * ((-1) ** ones * binomial(m, ones))
    return out


def multiplicity_table(n: int) -> dict:
    """Eigenvalue -> multiplicity: beta_k with C(n, 2k), zero with 2^(n-1)."""
    out = {beta(k): binomial(n, 2 * k) for k in range(n // 2 + 1)}
    out[mpq(0)] = 2 ** (n - 1)
    if sum(out.values()) != 2 ** n:
        raise AssertionError("multiplicities do not sum to 2^n")
    return out


def pi_weights(n: int) -> list:
    """Stationary weights over little-endian state indices (k = 2)."""
    out = []
    for x in range(1 << n):
        ones = bin(x).count("1")
        out.append(mpq(1, (n + 1) * binomial(n, ones)))
    return out


def inner_product(u: Sequence, v: Sequence, weights: Sequence) -> Rational:
    return sum(a * b * w for a, b, w in zip(u, v, weights))


def basis_records(basis: Sequence) -> list:
    """JSON-ready records for the basis export."""
    out = []
    for vec in basis:
        out.append({
            "m": vec.m,
            "ell": vec.ell,
            "tableau_second_row": list(vec.tableau.second_row),
            "eigenvalue": str(vec.eigenvalue.value),
            "squared_norm": str(vec.squared_norm),
            "coordinates": [str(c) for c in vec.coordinates],
        })
    return out
