import pytest
from gmpy2 import mpq

from burnside_lab.exactcore import binomial
from burnside_lab.spectral import beta
from burnside_lab.verifier import (
    CheckResult,
    run_suite,
    survey_spectrum,
    verify_ck_multiplicities,
    verify_eigenstructure,
    verify_identities_appendixA,
    verify_johnson_gram,
    verify_lumpings,
    verify_orthobasis,
    verify_pplus_conjecture,
    verify_statistics_identities,
)


def test_checkresult_invariant():
    with pytest.raises(ValueError):
        CheckResult("x", (), "fail")
    with pytest.raises(ValueError):
        CheckResult("x", (), "maybe")


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_eigenstructure(n):
    result = verify_eigenstructure(n)
    assert result.passed, result.witness
    if n == 4:
        assert result.details["multiplicities"] == {"1": 1, "1/4": 6,
                                                    "9/64": 1, "0": 8}
    if n == 1:
        assert result.details["multiplicities"] == {"1": 1, "0": 1}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_orthobasis(n):
    result = verify_orthobasis(n)
    assert result.passed, result.witness
    assert result.details["vectors"] == 1 << n


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_lumpings(n):
    result = verify_lumpings(n)
    assert result.passed, result.witness


def test_appendix_a_small_grid():
    result = verify_identities_appendixA(max_c=5, max_ms=4, a2_max_n=7,
                                         cert_points=120)
    assert result.passed, result.witness
    checked = result.details["certificate_points"]
    assert min(checked.values()) > 0


def test_certificate_near_specific_point():
    from burnside_lab.verifier import (
        _hbar,
        _ratio_Fa,
        _ratio_Fb,
        _ratio_Fc,
        _telescope_H,
    )

    ratios = ((_ratio_Fa, 2), (_ratio_Fb, 3), (_ratio_Fc, 4))
    # at (3,2,1,1,1) the transcribed F_a has a removable singularity at the
    # shifted point a+1 (vanishing summand against a vanishing denominator
    # factor), so plain rational evaluation skips it; all non-singular
    # neighbors verify exactly (see decisions ledger)
    assert _telescope_H("m", ratios, (3, 2, 1, 1, 1)) is None
    for point in [(4, 2, 1, 1, 1), (3, 1, 1, 1, 1), (3, 2, 0, 1, 1),
                  (3, 2, 1, 0, 1), (3, 2, 1, 2, 1), (4, 2, 2, 1, 1)]:
        outcome = _telescope_H("m", ratios, point)
        assert outcome is not False, point
    assert _hbar(0, 0) == 1


@pytest.mark.parametrize("n,m,mults", [
    (4, 2, (1, 3, 2)),
    (5, 2, (1, 4, 5)),
])
def test_johnson_gram(n, m, mults):
    result = verify_johnson_gram(n, m)
    assert result.passed, result.witness
    expected = [binomial(n, t) - binomial(n, t - 1) for t in range(m + 1)]
    assert tuple(expected) == mults
    assert sorted(result.details["multiplicities"].values()) == sorted(mults)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_pplus(n):
    result = verify_pplus_conjecture(n)
    assert result.passed, result.witness


def test_ck_multiplicities_small():
    result = verify_ck_multiplicities(2, 5, beta(1), expected=10)
    assert result.passed, result.witness
    assert result.details["multiplicity"] == 10
    result = verify_ck_multiplicities(3, 3, mpq(1, 18), expected=0)
    assert result.passed, result.witness
    assert result.details["multiplicity"] == 0
    result = verify_ck_multiplicities(3, 4, mpq(1, 18), expected=2)
    assert result.passed, result.witness
    assert result.details["lumped_multiplicity"] == 0


def test_ck_multiplicities_lifted_route():
    result = verify_ck_multiplicities(3, 5, mpq(1, 18), expected=10)
    assert result.passed, result.witness
    assert result.details["method"].startswith("lifted")
    assert result.details["multiplicity"] == 10
    assert result.details["lumped_multiplicity"] == 0


def test_ck_multiplicities_wrong_expectation_fails():
    result = verify_ck_multiplicities(3, 4, mpq(1, 18), expected=3)
    assert not result.passed
    assert "expected 3" in result.witness


def test_survey_spectrum():
    result = survey_spectrum(3, 2)
    clusters = dict((round(c, 6), m) for c, m in result.details["clusters"])
    assert clusters == {1.0: 1, 0.25: 3, 0.0: 4}
    assert result.details["rank_confirmed"].get("1/4") == 3


@pytest.mark.parametrize("n", [4, 5])
def test_statistics_identities(n):
    result = verify_statistics_identities(n)
    assert result.passed, result.witness


def test_run_suite_deterministic():
    first = run_suite("stats")
    second = run_suite("stats")
    assert [(r.name, r.params, r.status) for r in first] == \
        [(r.name, r.params, r.status) for r in second]
    assert all(r.passed for r in first)
