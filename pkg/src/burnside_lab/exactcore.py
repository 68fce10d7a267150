"""Exact rational arithmetic, combinatorial primitives, dense rational linear
algebra, and signed log-space reals.

Rationals are gmpy2.mpq throughout: always normalized (lowest terms, positive
denominator), arbitrary precision, and fast enough for dense elimination on
state spaces of a few thousand states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from gmpy2 import mpq, mpz

Rational = type(mpq(0))

__all__ = [
    "Rational",
    "mpq",
    "mpz",
    "binomial",
    "multinomial",
    "rising_factorial",
    "RationalMatrix",
    "rational_rank",
    "rational_nullspace",
    "modp_rank",
    "modp_value",
    "LogReal",
]


def binomial(n: int, k: int) -> int:
    """C(n, k) for n >= 0, with the convention 0 outside 0 <= k <= n."""
    if n < 0:
        raise ValueError("binomial needs n >= 0, got n=%d" % n)
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def multinomial(n: int, parts: Sequence[int]) -> int:
    """n! / (parts_0! * ... * parts_r!); parts must sum to n."""
    if sum(parts) != n:
        raise ValueError("multinomial parts %r do not sum to %d" % (parts, n))
    out = mpz(math.factorial(n))
    for p in parts:
        out //= math.factorial(p)
    return int(out)


def rising_factorial(a, j: int):
    """Rising factorial (a)_j = a (a+1) ... (a+j-1), with (a)_0 = 1."""
    if j < 0:
        raise ValueError("rising_factorial needs j >= 0, got j=%d" % j)
    v = mpq(1)
    a = mpq(a)
    for t in range(j):
        v *= a + t
    return v


class RationalMatrix:
    """Dense matrix of exact rationals, stored as a list of row lists."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable]):
        self.data = [[mpq(x) for x in row] for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.rows else 0
        if any(len(row) != self.cols for row in self.data):
            raise ValueError("ragged rows")

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[0] * cols for _ in range(rows)])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, RationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self):
        return "RationalMatrix(%dx%d)" % (self.rows, self.cols)

    def row(self, i: int) -> list:
        return self.data[i]

    def copy(self) -> "RationalMatrix":
        out = RationalMatrix.__new__(RationalMatrix)
        out.rows, out.cols = self.rows, self.cols
        out.data = [row[:] for row in self.data]
        return out

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch %dx%d @ %dx%d"
                             % (self.rows, self.cols, other.rows, other.cols))
        bt = list(zip(*other.data))
        out = RationalMatrix.__new__(RationalMatrix)
        out.rows, out.cols = self.rows, other.cols
        out.data = [
            [sum(a * b for a, b in zip(row, col) if a) for col in bt]
            for row in self.data
        ]
        out.data = [[mpq(x) for x in row] for row in out.data]
        return out

    def __matmul__(self, other):
        return self.matmul(other)

    def matvec(self, v: Sequence) -> list:
        if self.cols != len(v):
            raise ValueError("shape mismatch")
        return [sum(a * b for a, b in zip(row, v) if a) for row in self.data]

    def kron(self, other: "RationalMatrix") -> "RationalMatrix":
        out = []
        for arow in self.data:
            for brow in other.data:
                out.append([a * b for a in arow for b in brow])
        return RationalMatrix(out)

    def sub_scaled_identity(self, lam) -> "RationalMatrix":
        if self.rows != self.cols:
            raise ValueError("square matrix required")
        out = self.copy()
        for i in range(self.rows):
            out.data[i][i] -= lam
        return out


def mat_pow(m: RationalMatrix, power: int) -> RationalMatrix:
    """Exact matrix power by repeated squaring; power 0 gives the identity."""
    if m.rows != m.cols:
        raise ValueError("mat_pow needs a square matrix")
    if power < 0:
        raise ValueError("mat_pow needs power >= 0")
    result = RationalMatrix.identity(m.rows)
    base = m
    while power:
        if power & 1:
            result = result.matmul(base)
        base = base.matmul(base) if power > 1 else base
        power >>= 1
    return result


def _integer_rows(m: RationalMatrix) -> list:
    """Scale each row by its denominator lcm (rank preserving)."""
    out = []
    for row in m.data:
        l = mpz(1)
        for x in row:
            d = x.denominator
            l = l * d // math.gcd(int(l), int(d))
        out.append([mpz(x.numerator) * (l // x.denominator) for x in row])
    return out


def rational_rank(m: RationalMatrix) -> int:
    """Rank over Q via fraction-free (Bareiss) elimination.

    Rows are first scaled to integers; intermediate entries are then minors of
    the scaled matrix, which keeps growth polynomial instead of exponential.
    """
    a = _integer_rows(m)
    rows, cols = len(a), (len(a[0]) if a else 0)
    prev = mpz(1)
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        pivot_row = a[r]
        pivot = pivot_row[c]
        for i in range(r + 1, rows):
            cur = a[i]
            f = cur[c]
            if f == 0:
                if prev != 1:
                    for j in range(c + 1, cols):
                        cur[j] = (pivot * cur[j]) // prev
                else:
                    for j in range(c + 1, cols):
                        cur[j] = pivot * cur[j]
            else:
                for j in range(c + 1, cols):
                    cur[j] = (pivot * cur[j] - f * pivot_row[j]) // prev
            cur[c] = mpz(0)
        prev = pivot
        r += 1
    return r


def rational_nullspace(m: RationalMatrix) -> list:
    """Basis of the right nullspace over Q, via reduced row echelon form.

    Returns a list of integer-scaled vectors (lists of mpq with content
    cleared to integers) spanning {v : m v = 0}.
    """
    a = [row[:] for row in m.data]
    rows, cols = len(a), m.cols
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    free_cols = [c for c in range(cols) if c not in piv_cols]
    basis = []
    for fc in free_cols:
        v = [mpq(0)] * cols
        v[fc] = mpq(1)
        for rr, pc in enumerate(piv_cols):
            v[pc] = -a[rr][fc]
        l = mpz(1)
        for x in v:
            d = x.denominator
            l = l * d // math.gcd(int(l), int(d))
        basis.append([x * l for x in v])
    return basis


DEFAULT_PRIME = (1 << 31) - 1


def modp_value(x, p: int = DEFAULT_PRIME) -> int:
    """Image of a rational in F_p; the denominator must be coprime to p."""
    x = mpq(x)
    den = int(x.denominator) % p
    if den == 0:
        raise ZeroDivisionError("denominator divisible by p")
    return (int(x.numerator) % p) * pow(den, p - 2, p) % p


def modp_rank(a: np.ndarray, p: int = DEFAULT_PRIME) -> int:
    """Rank over F_p of an int64 matrix (entries reduced mod p).

    For a matrix of rationals with denominators coprime to p, the F_p rank of
    its image is a certified lower bound on the rank over Q: a nonzero minor
    mod p lifts to a nonzero rational minor.
    """
    a = np.ascontiguousarray(a % p, dtype=np.int64)
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        col = a[r + 1:, c]
        mask = col != 0
        if mask.any():
            a[r + 1:][mask] = (a[r + 1:][mask] - np.outer(col[mask], a[r])) % p
        r += 1
    return r


_NEG_INF = float("-inf")


@dataclass(frozen=True)
class LogReal:
    """Signed magnitude in natural-log space.

    sign is -1, 0, or +1; logmag is ln|value|, with -inf as the zero sentinel.
    Used where exact values (binomial sums at n ~ 10^6) overflow any float.
    """

    sign: int
    logmag: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0, or +1")
        if (self.sign == 0) != (self.logmag == _NEG_INF):
            raise ValueError("sign 0 iff logmag is -inf")

    @classmethod
    def zero(cls) -> "LogReal":
        return cls(0, _NEG_INF)

    @classmethod
    def from_log(cls, logmag: float, sign: int = 1) -> "LogReal":
        if logmag == _NEG_INF:
            return cls.zero()
        return cls(sign, logmag)

    @classmethod
    def from_rational(cls, x) -> "LogReal":
        x = mpq(x)
        if x == 0:
            return cls.zero()
        num, den = x.numerator, x.denominator
        sign = 1 if num > 0 else -1
        return cls(sign, math.log(abs(int(num))) - math.log(int(den)))

    @classmethod
    def from_float(cls, x: float) -> "LogReal":
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.logmag > 709.0:
            return math.inf * self.sign
        return self.sign * math.exp(self.logmag)

    def __mul__(self, other: "LogReal") -> "LogReal":
        s = self.sign * other.sign
        if s == 0:
            return LogReal.zero()
        return LogReal(s, self.logmag + other.logmag)

    def __pow__(self, k: int) -> "LogReal":
        if self.sign == 0:
            if k == 0:
                raise ValueError("0**0 in log space")
            return LogReal.zero()
        return LogReal(self.sign if k % 2 else 1, k * self.logmag)

    def __add__(self, other: "LogReal") -> "LogReal":
        # log-sum-exp with sign tracking
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        big, small = (self, other) if self.logmag >= other.logmag else (other, self)
        d = small.logmag - big.logmag
        if self.sign == other.sign:
            return LogReal(big.sign, big.logmag + math.log1p(math.exp(d)))
        t = 1.0 - math.exp(d)
        if t <= 0.0:
            return LogReal.zero()
        return LogReal(big.sign, big.logmag + math.log(t))

    def __neg__(self) -> "LogReal":
        if self.sign == 0:
            return self
        return LogReal(-self.sign, self.logmag)

    def __sub__(self, other: "LogReal") -> "LogReal":
        return self + (-other)

    def compare_log(self, log_threshold: float) -> int:
        """Sign of (self - exp(log_threshold)) for positive thresholds."""
        if self.sign <= 0:
            return -1
        if self.logmag == log_threshold:
            return 0
        return 1 if self.logmag > log_threshold else -1
