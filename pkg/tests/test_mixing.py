import math

import pytest
from gmpy2 import mpq

from burnside_lab.chain import State, build_kernel
from burnside_lab.exactcore import LogReal
from burnside_lab.mixing import (
    bound_envelopes,
    chi2_avg,
    chi2_avg_definition,
    chi2_exact,
    chi2_from_one_one,
    chi2_spectral,
    cutoff_scan,
    cutoff_time,
    distance_curve,
    self_loop_lower_bound,
    tv_exact,
)
from burnside_lab.spectral import build_basis

from oracles import expectation_oracle


def s(text):
    return State.from_string(text)


def test_mat_pow_k2_rows_near_pi():
    from burnside_lab.exactcore import mat_pow

    kernel = build_kernel(2, 2)
    squared = mat_pow(kernel.matrix, 2)
    for row in squared.data:
        tv = sum(abs(p - q) for p, q in zip(row, kernel.stationary)) / 2
        assert tv <= mpq(1, 8)


def test_chi2_exact_values():
    assert chi2_exact(2, s("01"), 1) == mpq(1, 8)
    for n in range(1, 5):
        kernel = build_kernel(n, 2)
        for idx in range(1 << n):
            x = State.from_index(idx, n, 2)
            assert chi2_exact(n, x, 0) == 1 / kernel.stationary[idx] - 1


def test_tv_exact_values():
    assert tv_exact(2, s("01"), 1) == mpq(1, 6)
    for n in range(1, 5):
        kernel = build_kernel(n, 2)
        for idx in range(1 << n):
            x = State.from_index(idx, n, 2)
            assert tv_exact(n, x, 0) == 1 - kernel.stationary[idx]


def test_chi2_spectral_equals_exact():
    for n in range(2, 7):
        basis = build_basis(n)
        for idx in range(1 << n):
            x = State.from_index(idx, n, 2)
            for step in range(1, 5):
                assert chi2_spectral(n, x, step, basis) == chi2_exact(n, x, step)
    with pytest.raises(ValueError):
        chi2_spectral(3, s("001"), 0)


def test_chi2_avg_examples():
    assert chi2_avg(2, 1) == mpq(1, 16)
    assert chi2_avg(4, 1) == mpq(3, 8) + mpq(81, 4096)
    with pytest.raises(ValueError):
        chi2_avg(4, 0)


def test_chi2_avg_matches_definition():
    for n in range(1, 7):
        for ell in range(1, 5):
            assert chi2_avg(n, ell) == chi2_avg_definition(n, ell)


def test_chi2_avg_orbit_decomposition():
    # chi2_avg = (1/(n+1)) sum_i chi2 from any representative of orbit i,
    # and chi-square distance is constant on orbits
    for n in range(2, 7):
        kernel = build_kernel(n, 2)
        for ell in (1, 2):
            per_orbit = []
            for ones in range(n + 1):
                rep = State(2, (1,) * ones + (0,) * (n - ones))
                value = chi2_exact(n, rep, ell, kernel)
                per_orbit.append(value)
            assert chi2_avg(n, ell) == sum(per_orbit) / (n + 1)
        for idx in range(1 << n):
            x = State.from_index(idx, n, 2)
            rep = State(2, (1,) * x.ones() + (0,) * (n - x.ones()))
            assert chi2_exact(n, x, 1, kernel) == chi2_exact(n, rep, 1, kernel)


def test_chi2_avg_log_mode_accuracy():
    for n in (8, 16, 24, 30):
        for ell in (1, 2, 3):
            exact = float(chi2_avg(n, ell, mode="exact"))
            logged = chi2_avg(n, ell, mode="log")
            assert logged.sign == 1
            assert abs(math.exp(logged.logmag) - exact) / exact < 1e-9


def test_chi2_avg_log_divergent_side():
    n = 10 ** 6
    ell = math.ceil(0.9 * cutoff_time(n))
    value = chi2_avg(n, ell, mode="log")
    assert value.sign == 1 and value.logmag > 0


def test_distance_curve_monotone_chi2():
    curve = distance_curve(4, s("0011"), "chi2", range(1, 6))
    values = curve.values()
    assert all(a >= b for a, b in zip(values, values[1:]))
    tv_curve = distance_curve(4, s("0011"), "tv", [0, 1, 2])
    assert len(tv_curve.points) == 3


def test_bound_envelopes_report():
    kernel = build_kernel(4, 2)
    for ones in range(5):
        x = State(2, (1,) * ones + (0,) * (4 - ones))
        for ell in range(0, 4):
            report = bound_envelopes(4, x, ell, kernel)
            assert report.chi2_lower_from_tv <= report.chi2
            assert report.tv <= report.aldous_tv_upper
            assert report.chi2 <= report.chi2_upper_2l
            assert report.holds()


def test_bound_envelope_invariants_full_ranges():
    # 4 TV^2 <= chi2 and TV <= n (1/2)^l for n <= 8, l <= 6; the
    # chi2(l) <= (1/pi) TV(2l) comparison for n <= 6.  Distances are
    # constant on orbits (checked elsewhere), so orbit representatives
    # stand in for every state.
    for n in range(2, 9):
        kernel = build_kernel(n, 2)
        for ones in range(n + 1):
            x = State(2, (1,) * ones + (0,) * (n - ones))
            tv_c = dict(distance_curve(n, x, "tv", range(0, 13), kernel).points)
            chi_c = dict(distance_curve(n, x, "chi2", range(0, 7), kernel).points)
            pi_x = kernel.stationary[x.index()]
            for ell in range(0, 7):
                assert 4 * tv_c[ell] ** 2 <= chi_c[ell]
                assert tv_c[ell] <= mpq(n, 2 ** ell)
                if n <= 6:
                    assert chi_c[ell] <= tv_c[2 * ell] / pi_x


def test_self_loop_lower_bound_values():
    assert self_loop_lower_bound(s("01"), 1) == mpq(1, 24)
    # exact frozen values for the half-half state at n=100
    half = State(2, (0,) * 50 + (1,) * 50)
    at5 = self_loop_lower_bound(half, 5)
    assert at5 > 10 ** 6
    at10 = self_loop_lower_bound(half, 10)
    assert at10 < mpq(1, 10 ** 12)  # the single-term bound has gone slack here
    # a true lower bound wherever K(x,x)^l >= pi(x)
    from burnside_lab.chain import kernel_entry, stationary_probability

    for n in range(2, 6):
        for idx in range(1 << n):
            x = State.from_index(idx, n, 2)
            for ell in (1, 2, 3):
                if kernel_entry(x, x) ** ell >= stationary_probability(x):
                    assert self_loop_lower_bound(x, ell) <= chi2_exact(n, x, ell)
    # l -> infinity limit is pi(x)-bounded, below any fixed epsilon for
    # exponentially small pi
    assert self_loop_lower_bound(half, 500) < mpq(1, 10 ** 9)


def test_chi2_from_one_one():
    for n in range(3, 11):
        for step in range(3, 7):
            report = chi2_from_one_one(n, step)
            assert report.within_envelope
    # spectral assembly equals the matrix-power value exactly
    for n in range(3, 7):
        e_n = State(2, (0,) * (n - 1) + (1,))
        for step in range(1, 5):
            assert chi2_from_one_one(n, step).value == chi2_exact(n, e_n, step)
    # n=3 has exactly the two beta_1 terms, with coefficient 5
    assert chi2_from_one_one(3, 4).value == 5 * mpq(1, 4) ** 8


def test_one_one_numerators_match_figure():
    # f^{0,2}(e_n) = (n-1)(n-6)/2 at n=3 gives -3 (state 001 in the table)
    n = 3
    assert mpq((n - 1) * (n - 6), 2) == -3


def test_cutoff_scan():
    rows = cutoff_scan([10 ** 5], [0.9, 1.0, 1.1])
    values = {r.factor: r.value for r in rows}
    assert values[0.9].logmag > 10
    assert values[1.1].logmag < -10
    logs = [values[f].logmag for f in (0.9, 1.0, 1.1)]
    assert logs[0] > logs[1] > logs[2]
    plain = cutoff_scan([1000], [1.0], refined=False)
    assert plain[0].ell != cutoff_scan([1000], [1.0], refined=True)[0].ell


def test_expected_alternations_consistency_with_matrix_powers():
    from burnside_lab.stats import alternations, expected_alternations_after

    for n in (2, 3, 4):
        kernel = build_kernel(n, 2)
        for idx in range(1 << n):
            x = State.from_index(idx, n, 2)
            for ell in range(0, 4):
                oracle = expectation_oracle(kernel, x, ell,
                                            lambda y: mpq(alternations(y)))
                assert expected_alternations_after(x, ell) == oracle
