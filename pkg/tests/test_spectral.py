import itertools
import random

import pytest
from gmpy2 import mpq

from burnside_lab.chain import State, build_kernel
from burnside_lab.spectral import (
    SingularTauError,
    Tableau,
    beta,
    build_basis,
    build_f_Q,
    build_g_Q,
    chebyshev_eval,
    column_reading_tableau,
    enumerate_tableaux,
    f_subset_eval,
    gamma_Q,
    gram_normalized,
    hahn_eval,
    inner_product,
    jm_apply,
    multiplicity_table,
    norm_f_Q,
    phi_expand,
    pi_weights,
    subset_self_inner,
    subset_vector,
    t_scalar,
    tableau_count,
    tau_apply,
)
from burnside_lab.exactcore import RationalMatrix, binomial, rational_rank

from oracles import hahn_orthogonality_rhs, hahn_weight


def test_beta_values():
    assert beta(0) == 1
    assert beta(1) == mpq(1, 4)
    assert beta(2) == mpq(9, 64)
    assert beta(3) == mpq(25, 256)


def test_f_subset_eval():
    x = State.from_string("01")
    assert f_subset_eval((1, 2), x) == -2
    for idx in range(8):
        assert f_subset_eval((), State.from_index(idx, 3)) == 1
    x = State.from_string("1100")
    assert f_subset_eval((1, 2, 3, 4), x) == 6


def test_chebyshev():
    for n in range(1, 9):
        for i in range(n + 1):
            assert chebyshev_eval(n, 0, i) == 1
            # recurrence cross-checked against the alternating closed form
            assert chebyshev_eval(n, n, i) == mpq((-1) ** i * binomial(n, i))
    assert chebyshev_eval(3, 1, 0) == 1
    assert [chebyshev_eval(3, 3, i) for i in range(4)] == [1, -3, 3, -1]
    with pytest.raises(ValueError):
        chebyshev_eval(3, 4, 0)


def test_hahn_normalization_and_chebyshev_special_case():
    for n in range(1, 9):
        for ell in range(n + 1):
            assert hahn_eval(n, 0, 0, ell, 0) == 1
            for i in range(n + 1):
                assert hahn_eval(n, 0, 0, ell, i) == chebyshev_eval(n, ell, i)
    assert hahn_eval(5, mpq(1, 2), mpq(3, 2), 2, 0) == 1
    with pytest.raises(ValueError):
        hahn_eval(4, -2, 0, 1, 1)


def test_hahn_orthogonality():
    # the stated right side at (n, alpha, beta, ell) = (4, 1, 1, 2)
    n, alpha, bparam = 4, mpq(1), mpq(1)
    for ell in range(n + 1):
        for ellp in range(n + 1):
            lhs = sum(hahn_weight(n, alpha, bparam, i)
                      * hahn_eval(n, alpha, bparam, ell, i)
                      * hahn_eval(n, alpha, bparam, ellp, i)
                      for i in range(n + 1))
            if ell == ellp:
                assert lhs == hahn_orthogonality_rhs(n, alpha, bparam, ell)
            else:
                assert lhs == 0


def test_t_scalar():
    for n in range(1, 9):
        for m in range(n // 2 + 1):
            for i in range(n - 2 * m + 1):
                assert t_scalar(m, n, 0, i) == (-1) ** m * binomial(2 * m, m)
            for ell in range(n - 2 * m + 1):
                assert t_scalar(m, n, ell, 0) == ((-1) ** m * binomial(2 * m + ell, m)
                                                  * binomial(n - 2 * m, ell))
    # m = 0: values reduce to the discrete Chebyshev polynomials
    for n in range(1, 9):
        for ell in range(n + 1):
            for j in range(n + 1):
                assert (t_scalar(0, n, ell, j) ==
                        binomial(n, ell) * chebyshev_eval(n, ell, j))


def test_hahn_linkage():
    # Q^l_{n-2m;m,m}(i) * (-1)^m C(n-2m,l) C(2m+l,m) = T^{(l)}_{m,n}(i)
    for n in range(1, 9):
        for m in range(n // 2 + 1):
            for ell in range(n - 2 * m + 1):
                for i in range(n - 2 * m + 1):
                    lhs = (hahn_eval(n - 2 * m, m, m, ell, i)
                           * (-1) ** m * binomial(n - 2 * m, ell)
                           * binomial(2 * m + ell, m))
                    assert lhs == t_scalar(m, n, ell, i)


def test_tableaux_enumeration():
    tabs = enumerate_tableaux(3, 1)
    assert [t.second_row for t in tabs] == [(2,), (3,)]
    assert tabs[0].is_column_reading()
    assert len(enumerate_tableaux(4, 2)) == 2
    for n in range(1, 9):
        assert len(enumerate_tableaux(n, 0)) == 1
        for m in range(n // 2 + 1):
            assert len(enumerate_tableaux(n, m)) == tableau_count(n, m)
    with pytest.raises(ValueError):
        Tableau(4, (1,))
    with pytest.raises(ValueError):
        Tableau(4, (2, 3))


def test_tableau_contents():
    t = Tableau(5, (2, 4))
    # rows: (1,3,5 / 2,4): contents col-row
    assert t.content(1) == 0
    assert t.content(2) == -1
    assert t.content(3) == 1
    assert t.content(4) == 0
    assert t.content(5) == 2


def test_jm_apply():
    # r=2 on the indicator of 10 gives the indicator of 01 (n=2)
    v = [mpq(0)] * 4
    v[State.from_string("10").index()] = mpq(1)
    out = jm_apply(2, v)
    assert out[State.from_string("01").index()] == 1
    assert out[State.from_string("10").index()] == 0
    # M_r and M_r' commute on random vectors
    rng = random.Random(3)
    for n in range(2, 6):
        v = [mpq(rng.randint(-4, 4)) for _ in range(1 << n)]
        for r1 in range(2, n + 1):
            for r2 in range(2, n + 1):
                assert jm_apply(r1, jm_apply(r2, v)) == jm_apply(r2, jm_apply(r1, v))


def test_g_vectors_are_jm_eigenvectors():
    for n in range(2, 6):
        for m in range(n // 2 + 1):
            for tab in enumerate_tableaux(n, m):
                for i in range(n - 2 * m + 1):
                    g = build_g_Q(n, m, i, tab)
                    for r in range(2, n + 1):
                        ct = tab.content(r)
                        assert jm_apply(r, g) == [ct * val for val in g]


def test_tau_square_scaling_and_intertwining():
    n = 4
    weights = pi_weights(n)
    tab = column_reading_tableau(n, 1)
    for i in range(3):
        v = build_g_Q(n, 1, i, tab)
        d = tab.content(2) - tab.content(3)
        tv = tau_apply(2, v, tab)
        lhs = inner_product(tv, tv, weights)
        rhs = mpq((d + 1) * (d - 1), d * d) * inner_product(v, v, weights)
        assert lhs == rhs
        # intertwining: M_3 (tau_2 v) = ct(Q(2)) tau_2 v
        assert jm_apply(3, tv) == [tab.content(2) * val for val in tv]


def test_tau_singularity_guard():
    # equal adjacent contents cannot occur in a standard two-row tableau,
    # so the guard is exercised through a same-diagonal stub
    class SameDiagonal:
        def content(self, r):
            return 0

    with pytest.raises(SingularTauError):
        tau_apply(2, [mpq(1)] * 16, SameDiagonal())


def test_tau_word_reproduces_fig2_row():
    # tau_2 applied to f_T^{1,0} gives the {1,2;3} tableau vector
    n = 3
    col = column_reading_tableau(n, 1)
    f_col = build_f_Q(n, 1, 0, col)
    moved = tau_apply(2, list(f_col.coordinates), col)
    expected = build_f_Q(n, 1, 0, Tableau(3, (3,)))
    assert moved == list(expected.coordinates)
    fig_order = [moved[State.from_string(t).index()]
                 for t in ["000", "001", "010", "011", "100", "101", "110", "111"]]
    assert fig_order == [0, -2, 1, -1, 1, -1, 2, 0]


def test_build_f_Q_examples():
    vec = build_f_Q(3, 0, 1, column_reading_tableau(3, 0))
    fig = [vec.coordinates[State.from_string(t).index()]
           for t in ["000", "001", "010", "011", "100", "101", "110", "111"]]
    assert fig == [3, 1, 1, -1, 1, -1, -1, -3]
    assert vec.squared_norm == 5
    vec = build_f_Q(3, 1, 0, column_reading_tableau(3, 1))
    fig = [vec.coordinates[State.from_string(t).index()]
           for t in ["000", "001", "010", "011", "100", "101", "110", "111"]]
    assert fig == [0, 0, -2, -2, 2, 2, 0, 0]
    assert vec.squared_norm == mpq(4, 3)
    ones = build_f_Q(3, 0, 0, column_reading_tableau(3, 0))
    assert all(c == 1 for c in ones.coordinates)
    assert ones.eigenvalue.value == 1


def test_gamma_examples():
    assert gamma_Q(column_reading_tableau(6, 3)) == 1
    assert gamma_Q(Tableau(3, (3,))) == mpq(3, 4)
    assert (gamma_Q(Tableau(3, (3,))) * norm_f_Q(3, 1, 0, column_reading_tableau(3, 1))
            == norm_f_Q(3, 1, 0, Tableau(3, (3,))) == 1)


def test_norm_examples_and_direct_sums():
    assert norm_f_Q(3, 0, 2, column_reading_tableau(3, 0)) == 9
    assert norm_f_Q(3, 1, 1, Tableau(3, (2,))) == 3
    for n in range(2, 7):
        weights = pi_weights(n)
        for m in range(n // 2 + 1):
            for tab in enumerate_tableaux(n, m):
                for ell in range(n - 2 * m + 1):
                    vec = build_f_Q(n, m, ell, tab)
                    direct = inner_product(vec.coordinates, vec.coordinates, weights)
                    assert direct == vec.squared_norm


def test_basis_eigen_equations_and_completeness():
    for n in range(2, 7):
        kernel = build_kernel(n, 2)
        basis = build_basis(n, check_kernel=kernel)  # asserts K f = beta f
        stack = RationalMatrix([list(v.coordinates) for v in basis])
        assert rational_rank(stack) == 1 << n


def test_phi_identity():
    for n in range(2, 6):
        for m in range(n // 2 + 1):
            for tab in enumerate_tableaux(n, m):
                for ell in range(n - 2 * m + 1):
                    f = build_f_Q(n, m, ell, tab)
                    g = build_g_Q(n, m, ell, tab)
                    assert tuple(phi_expand(g)) == f.coordinates


def test_gram_normalized():
    assert gram_normalized((1, 2), (1, 2)) == 1
    assert gram_normalized((1, 2), (2, 3)) == mpq(1, 4)
    assert gram_normalized((1, 2), (3, 4, 5, 6)) == 0
    assert subset_self_inner(2) == 2
    with pytest.raises(ValueError):
        gram_normalized((1,), (2,))
    # brute-force cross-check of the self inner product at n=4, m=2
    weights = pi_weights(4)
    v = subset_vector(4, (1, 3))
    assert inner_product(v, v, weights) == 2


def test_multiplicity_table():
    assert multiplicity_table(4) == {mpq(1): 1, mpq(1, 4): 6, mpq(9, 64): 1,
                                     mpq(0): 8}
    assert multiplicity_table(3) == {mpq(1): 1, mpq(1, 4): 3, mpq(0): 4}
    for n in range(1, 11):
        assert sum(multiplicity_table(n).values()) == 1 << n


def test_subset_stack_rank_n4():
    # the C(4,2) = 6 vectors f_S with |S| = 2 are linearly independent
    stack = RationalMatrix([subset_vector(4, s)
                            for s in itertools.combinations(range(1, 5), 2)])
    assert rational_rank(stack) == 6


def test_subset_vectors_are_eigenvectors():
    for n in range(1, 7):
        kernel = build_kernel(n, 2)
        for mask in range(1 << n):
            subset = [i + 1 for i in range(n) if (mask >> i) & 1]
            vec = subset_vector(n, subset)
            lam = beta(len(subset) // 2) if len(subset) % 2 == 0 else mpq(0)
            assert kernel.matrix.matvec(vec) == [lam * v for v in vec]
