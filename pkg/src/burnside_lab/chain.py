"""The Burnside process on k-ary n-tuples: states, exact kernels, the
two-stage sampler, the stationary distribution, and both lumpings.

One step of the process from x: pick a uniform permutation fixing x (a
uniform element of the product of symmetric groups on the value classes),
write it in disjoint cycles, and label each cycle with an independent
uniform value in {0..k-1}.  Summing the cycle-count generating function
x(x+1)...(x+N-1) over each class gives the closed-form transition
probability: with n_ab the number of coordinates where x has value a and y
has value b,

    K(x, y) = prod_a [ prod_b (1/k)_{n_ab} ] / (sum_b n_ab)!

which at k = 2 reduces to the familiar central-binomial expression.  The
stationary distribution is pi(x) = 1/(Z |O_x|), uniform over the Z orbits.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from gmpy2 import mpq, mpz

from .exactcore import RationalMatrix, binomial, multinomial, rising_factorial

__all__ = [
    "State",
    "PairCounts",
    "Kernel",
    "OrbitKernel",
    "RngStream",
    "StateSpaceCapError",
    "state_cap",
    "kernel_entry_binary",
    "kernel_entry_alphabet",
    "kernel_entry",
    "stationary_probability",
    "orbit_count",
    "build_kernel",
    "burnside_step",
    "run_chain",
    "sample_stationary",
    "sample_stationary_many",
    "lump_to_orbits",
    "lump_to_coordinates",
    "orbit_kernel",
    "orbit_labels",
    "pair_class_matrix",
]

DEFAULT_STATE_CAPS = {2: 4096, 3: 2187}
FALLBACK_STATE_CAP = 4096
CAP_ENV_VAR = "BURNSIDE_STATE_CAP"


class StateSpaceCapError(ValueError):
    """Requested state space exceeds the configured cap."""


def state_cap(k: int) -> int:
    override = os.environ.get(CAP_ENV_VAR)
    if override:
        return int(override)
    return DEFAULT_STATE_CAPS.get(k, FALLBACK_STATE_CAP)


def _check_cap(n: int, k: int) -> int:
    size = k ** n
    cap = state_cap(k)
    if size > cap:
        raise StateSpaceCapError(
            "state space k^n = %d^%d = %d exceeds cap %d (override with %s)"
            % (k, n, size, cap, CAP_ENV_VAR)
        )
    return size


@dataclass(frozen=True)
class State:
    """A k-ary n-tuple.  digits[i] is coordinate i+1; every digit is < k."""

    k: int
    digits: tuple

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("alphabet size must be >= 2")
        if any(d < 0 or d >= self.k for d in self.digits):
            raise ValueError("digit out of range for alphabet %d" % self.k)

    @property
    def n(self) -> int:
        return len(self.digits)

    @classmethod
    def from_index(cls, index: int, n: int, k: int = 2) -> "State":
        # little-endian base-k: coordinate 1 is the least significant digit
        digits = []
        t = index
        for _ in range(n):
            digits.append(t % k)
            t //= k
        if t:
            raise ValueError("index %d out of range for k^n" % index)
        return cls(k, tuple(digits))

    @classmethod
    def from_string(cls, s: str, k: int = 2) -> "State":
        return cls(k, tuple(int(c) for c in s))

    def index(self) -> int:
        out = 0
        for d in reversed(self.digits):
            out = out * self.k + d
        return out

    def ones(self) -> int:
        return sum(1 for d in self.digits if d == 1)

    def value_counts(self) -> tuple:
        counts = [0] * self.k
        for d in self.digits:
            counts[d] += 1
        return tuple(counts)

    def __str__(self):
        return "".join(str(d) for d in self.digits)


@dataclass(frozen=True)
class PairCounts:
    """k x k table; entry (a, b) counts coordinates with x_i = a, y_i = b."""

    k: int
    table: tuple

    @classmethod
    def from_states(cls, x: State, y: State) -> "PairCounts":
        if x.n != y.n or x.k != y.k:
            raise ValueError("states must share n and k")
        k = x.k
        counts = [0] * (k * k)
        for a, b in zip(x.digits, y.digits):
            counts[a * k + b] += 1
        return cls(k, tuple(counts))

    @property
    def n(self) -> int:
        return sum(self.table)

    def row_sum(self, a: int) -> int:
        return sum(self.table[a * self.k:(a + 1) * self.k])


@lru_cache(maxsize=None)
def _entry_from_counts(k: int, counts: tuple):
    value = mpq(1)
    for c in counts:
        if c:
            value *= rising_factorial(mpq(1, k), c)
    for a in range(k):
        value /= math.factorial(sum(counts[a * k:(a + 1) * k]))
    return value


def kernel_entry(x: State, y: State):
    """Exact one-step transition probability K(x, y) for any alphabet."""
    pc = PairCounts.from_states(x, y)
    return _entry_from_counts(pc.k, pc.table)


def kernel_entry_alphabet(x: State, y: State):
    """General-k closed form prod_a prod_b (1/k)_{n_ab} / n_{a.}!."""
    return kernel_entry(x, y)


def kernel_entry_binary(x: State, y: State):
    """Binary closed form: four central binomials over 4^n and two binomials."""
    if x.k != 2 or y.k != 2:
        raise ValueError("kernel_entry_binary needs k = 2")
    if x.n != y.n:
        raise ValueError("states must share n")
    n = x.n
    pc = PairCounts.from_states(x, y).table
    n00, n01, n10, n11 = pc
    num = (mpz(binomial(2 * n00, n00)) * binomial(2 * n01, n01)
           * binomial(2 * n10, n10) * binomial(2 * n11, n11))
    den = (mpz(4) ** n * binomial(n00 + n01, n00) * binomial(n10 + n11, n10))
    return mpq(num, den)


def orbit_count(n: int, k: int) -> int:
    """Number of S_n-orbits on C_k^n: compositions of n into k parts."""
    return binomial(n + k - 1, k - 1)


def stationary_probability(x: State):
    """pi(x) = 1/(Z |O_x|); the orbit of x is its value-count class."""
    z = orbit_count(x.n, x.k)
    orbit_size = multinomial(x.n, x.value_counts())
    return mpq(1, z * orbit_size)


@dataclass(frozen=True)
class Kernel:
    """Dense exact transition matrix over all k^n states plus pi."""

    n: int
    k: int
    matrix: RationalMatrix
    stationary: tuple

    @property
    def size(self) -> int:
        return self.k ** self.n

    def states(self):
        return [State.from_index(i, self.n, self.k) for i in range(self.size)]

    def entry(self, x: State, y: State):
        return self.matrix[x.index(), y.index()]


def pair_class_matrix(n: int, k: int):
    """All-pairs profile classes, vectorized.

    Returns (class_index, profiles): class_index[x, y] is an int index into
    profiles, and profiles[c] is the k*k pair-count tuple shared by every
    state pair in class c.  K(x, y) depends on the pair only through this
    class, so kernels, lumpings, and mod-p reductions can run off this table.
    """
    size = k ** n
    digs = np.zeros((size, n), dtype=np.int64)
    t = np.arange(size, dtype=np.int64)
    for i in range(n):
        digs[:, i] = (t // (k ** i)) % k
    base = np.int64(n + 1)
    weights = base ** np.arange(k * k, dtype=np.int64)
    code = np.zeros((size, size), dtype=np.int64)
    for i in range(n):
        pair = digs[:, i][:, None] * k + digs[None, :, i]
        code += weights[pair]
    uniq, inv = np.unique(code, return_inverse=True)
    class_index = inv.reshape(size, size).astype(np.int32)
    profiles = []
    for u in uniq.tolist():
        cnt = []
        for _ in range(k * k):
            cnt.append(u % (n + 1))
            u //= (n + 1)
        profiles.append(tuple(cnt))
    return class_index, profiles


def build_kernel(n: int, k: int = 2, validate: bool = True) -> Kernel:
    """Full exact kernel with stationary distribution.

    Construction verifies (exactly) that rows sum to one and that detailed
    balance pi(x) K(x,y) = pi(y) K(y,x) holds, unless validate=False.
    """
    size = _check_cap(n, k)
    class_index, profiles = pair_class_matrix(n, k)
    values = [_entry_from_counts(k, prof) for prof in profiles]
    data = [[values[class_index[x, y]] for y in range(size)] for x in range(size)]
    matrix = RationalMatrix.__new__(RationalMatrix)
    matrix.rows = matrix.cols = size
    matrix.data = data
    pi = tuple(stationary_probability(State.from_index(i, n, k)) for i in range(size))
    kernel = Kernel(n=n, k=k, matrix=matrix, stationary=pi)
    if validate:
        _validate_kernel(kernel)
    return kernel


def _validate_kernel(kernel: Kernel) -> None:
    size = kernel.size
    m = kernel.matrix
    pi = kernel.stationary
    if sum(pi) != 1:
        raise AssertionError("stationary distribution does not sum to 1")
    for x in range(size):
        if sum(m.data[x]) != 1:
            raise AssertionError("row %d does not sum to 1" % x)
    for x in range(size):
        row = m.data[x]
        for y in range(x + 1, size):
            if pi[x] * row[y] != pi[y] * m.data[y][x]:
                raise AssertionError("detailed balance fails at (%d, %d)" % (x, y))


@dataclass(frozen=True)
class RngStream:
    """Deterministic, replayable randomness: (seed, stream) fixes all draws."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, offset: int) -> "RngStream":
        return RngStream(self.seed, self.stream + offset)


def _step_digits(digits, k: int, rng: np.random.Generator):
    n = len(digits)
    positions_by_value = {}
    for i, d in enumerate(digits):
        positions_by_value.setdefault(d, []).append(i)
    perm = [0] * n
    for positions in positions_by_value.values():
        shuffled = rng.permutation(len(positions))
        for src, dst in enumerate(shuffled):
            perm[positions[src]] = positions[dst]
    new_digits = [0] * n
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        label = int(rng.integers(k))
        j = start
        while not seen[j]:
            seen[j] = True
            new_digits[j] = label
            j = perm[j]
    return tuple(new_digits)


def burnside_step(x: State, rng) -> State:
    """One exact two-stage move (uniform stabilizer element, then uniform
    labels on its cycles).  Accepts an RngStream or a numpy Generator."""
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    return State(x.k, _step_digits(x.digits, x.k, gen))


def run_chain(x0: State, steps: int, rng: RngStream) -> list:
    """Trajectory (x0, x1, ..., x_steps); replayable from the stream."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    out = [x0]
    digits = x0.digits
    for _ in range(steps):
        digits = _step_digits(digits, x0.k, gen)
        out.append(State(x0.k, digits))
    return out


def sample_stationary_many(n: int, k: int, size: int, rng) -> np.ndarray:
    """size exact draws from pi as a (size, n) digit array.

    Draw an orbit uniformly (a uniform composition of n into k parts via
    stars and bars), then shuffle the induced multiset of values.
    """
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    slots = n + k - 1
    bar_pool = np.tile(np.arange(slots), (size, 1))
    bars = np.sort(gen.permuted(bar_pool, axis=1)[:, :k - 1], axis=1)
    edges = np.hstack([np.full((size, 1), -1), bars, np.full((size, 1), slots)])
    counts = np.diff(edges, axis=1) - 1  # (size, k), rows sum to n
    cum = np.cumsum(counts, axis=1)
    digits = np.zeros((size, n), dtype=np.int8)
    positions = np.arange(n)
    for j in range(k - 1):
        digits += (positions[None, :] >= cum[:, j][:, None]).astype(np.int8)
    return gen.permuted(digits, axis=1)


def sample_stationary(n: int, k: int, rng) -> State:
    """One exact draw from pi without running the chain."""
    row = sample_stationary_many(n, k, 1, rng)[0]
    return State(k, tuple(int(d) for d in row))


def orbit_labels(n: int, k: int) -> list:
    """All orbits as value-count tuples; for k=2, index i <-> (n-i, i)."""
    if k == 2:
        return [(n - i, i) for i in range(n + 1)]
    labels = []
    for combo in itertools.combinations(range(n + k - 1), k - 1):
        edges = (-1,) + combo + (n + k - 1,)
        labels.append(tuple(edges[j + 1] - edges[j] - 1 for j in range(k)))
    labels.sort()
    return labels


@dataclass(frozen=True)
class OrbitKernel:
    """Row-stochastic kernel on orbit labels with uniform stationary law."""

    n: int
    k: int
    labels: tuple
    matrix: RationalMatrix

    @property
    def size(self) -> int:
        return len(self.labels)

    def index_of_ones(self, i: int) -> int:
        if self.k != 2:
            raise ValueError("ones-count indexing is the k=2 labelling")
        return self.labels.index((self.n - i, i))


def lump_to_orbits(kernel: Kernel) -> OrbitKernel:
    """Project the chain onto orbits, first asserting Dynkin's criterion:
    the mass each state sends into an orbit must be constant on the source
    orbit.  Exact equality, no tolerance."""
    labels = orbit_labels(kernel.n, kernel.k)
    label_index = {lab: i for i, lab in enumerate(labels)}
    states = kernel.states()
    cell_of = [label_index[s.value_counts()] for s in states]
    members = [[] for _ in labels]
    for idx, c in enumerate(cell_of):
        members[c].append(idx)
    lumped = [[mpq(0)] * len(labels) for _ in labels]
    for ci, cell in enumerate(members):
        reference = None
        for x in cell:
            sums = [mpq(0)] * len(labels)
            row = kernel.matrix.data[x]
            for y, value in enumerate(row):
                sums[cell_of[y]] += value
            if reference is None:
                reference = sums
            elif sums != reference:
                raise AssertionError(
                    "Dynkin criterion fails on orbit %r" % (labels[ci],))
        lumped[ci] = reference
    return OrbitKernel(kernel.n, kernel.k, tuple(labels),
                       RationalMatrix(lumped))


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def orbit_kernel(n: int, k: int = 2) -> OrbitKernel:
    """Orbit chain built directly from the closed form (no k^n matrix).

    L(c, c') sums K(x, y) over y with value counts c' for a representative x
    with counts c; the number of y realizing a pair-count table M is the
    product over values a of multinomial(c_a; M[a, :]).
    """
    labels = orbit_labels(n, k)
    label_index = {lab: i for i, lab in enumerate(labels)}
    size = len(labels)
    data = [[mpq(0)] * size for _ in range(size)]
    for src_i, src in enumerate(labels):
        row_options = [list(_compositions(src[a], k)) for a in range(k)]
        for rows in itertools.product(*row_options):
            table = tuple(v for row in rows for v in row)
            dest = tuple(sum(rows[a][b] for a in range(k)) for b in range(k))
            ways = 1
            for a in range(k):
                ways *= multinomial(src[a], rows[a])
            data[src_i][label_index[dest]] += ways * _entry_from_counts(k, table)
    for row in data:
        if sum(row) != 1:
            raise AssertionError("orbit kernel row does not sum to 1")
    return OrbitKernel(n, k, tuple(labels), RationalMatrix(data))


def lump_to_coordinates(n: int, k: int, subset: Sequence[int],
                        kernel: Optional[Kernel] = None) -> Kernel:
    """Marginal chain on a coordinate subset.

    Groups states by their restriction to subset (1-based coordinates),
    asserts Dynkin's criterion exactly, and asserts the lumped matrix equals
    the Burnside kernel on |subset| coordinates entry-for-entry.
    """
    subset = tuple(sorted(subset))
    if not subset or subset[0] < 1 or subset[-1] > n:
        raise ValueError("subset must be a nonempty subset of 1..n")
    m = len(subset)
    if kernel is None:
        kernel = build_kernel(n, k)
    size = kernel.size
    msize = k ** m
    restrict = np.zeros(size, dtype=np.int64)
    for pos, coord in enumerate(subset):
        digit = (np.arange(size) // (k ** (coord - 1))) % k
        restrict += digit * (k ** pos)
    lumped = [[None] * msize for _ in range(msize)]
    seen = [False] * msize
    for x in range(size):
        u = int(restrict[x])
        sums = [mpq(0)] * msize
        row = kernel.matrix.data[x]
        for y, value in enumerate(row):
            sums[int(restrict[y])] += value
        if not seen[u]:
            lumped[u] = sums
            seen[u] = True
        elif sums != lumped[u]:
            raise AssertionError(
                "Dynkin criterion fails for coordinate subset %r" % (subset,))
    small = build_kernel(m, k)
    if lumped != small.matrix.data:
        raise AssertionError(
            "coordinate marginal does not equal the %d-coordinate kernel" % m)
    return small
