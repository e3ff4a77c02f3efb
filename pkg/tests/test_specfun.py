import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levygen.errors import AccuracyError, DomainError
from levygen.specfun import (
    gamma_ratio,
    gauss_2f1_at_1,
    gen_binomial,
    gen_binomial_table,
    hyp1f2,
    hyp2f1_neg1,
    log_gamma,
    pochhammer,
    sine_integral,
)
from oracles import gauss_direct_series


@pytest.mark.parametrize(
    "x, expected",
    [(1.0, (0.0, 1)), (0.5, (math.log(math.sqrt(math.pi)), 1)), (-0.5, (math.log(2 * math.sqrt(math.pi)), -1))],
)
def test_log_gamma_examples(x, expected):
    val, sign = log_gamma(x)
    assert sign == expected[1]
    assert val == pytest.approx(expected[0], abs=1e-15)


@given(st.floats(-199.9, 200.0).filter(lambda x: abs(x - round(x)) > 1e-6 or x > 0.5))
@settings(max_examples=200, deadline=None)
def test_log_gamma_matches_mpmath(x):
    val, sign = log_gamma(x)
    ref = mp.gamma(mp.mpf(x))
    assert sign == (1 if ref > 0 else -1)
    assert val == pytest.approx(float(mp.log(abs(ref))), rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
def test_log_gamma_poles(x):
    with pytest.raises(DomainError):
        log_gamma(x)


def test_gamma_ratio(derived):
    assert gamma_ratio(3, 2) == pytest.approx(2.0, rel=1e-15)
    assert gamma_ratio(0.5, 1.5) == pytest.approx(2.0, rel=1e-15)
    assert gamma_ratio(10.25, 12.75) == pytest.approx(derived["gamma_ratio_10.25_12.75"], rel=1e-12)
    assert gamma_ratio(1.5, -2.0) == 0.0
    with pytest.raises(DomainError):
        gamma_ratio(-3.0, 1.5)


def test_gamma_ratio_large_arguments_do_not_overflow():
    r = gamma_ratio(9999.75, 10001.25)
    assert r == pytest.approx(float(mp.gamma(mp.mpf(9999.75)) / mp.gamma(mp.mpf(10001.25))), rel=1e-11)


def test_pochhammer_examples():
    assert pochhammer(3.7, 0) == 1.0
    assert pochhammer(1, 5) == 120.0
    assert pochhammer(0.5, 3) == 1.875


@given(st.floats(-20, 20), st.integers(1, 30))
def test_pochhammer_recurrence(a, n):
    assert pochhammer(a, n) == pytest.approx(pochhammer(a, n - 1) * (a + (n - 1)), rel=1e-14, abs=1e-300)


def test_gen_binomial(derived):
    assert gen_binomial(0.7, 0) == 1.0
    assert gen_binomial(0.5, 1) == -0.5
    assert gen_binomial(1.5, 4) == pytest.approx(derived["gen_binomial_1.5_4"], rel=1e-13)
    table = gen_binomial_table(1.3, 40)
    assert all(table[k] == gen_binomial(1.3, k) for k in range(41))


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 1.25, 1.5, 1.75])
def test_gen_binomial_partial_sums_shrink(alpha):
    # sum_k g_k = (1 - 1)^alpha = 0; the partial sum up to K equals the
    # coefficient g_K(alpha - 1) and decays like K^{-alpha}
    partial = [abs(math.fsum(gen_binomial_table(alpha, K))) for K in range(3, 400)]
    assert all(b <= a for a, b in zip(partial, partial[1:]))
    for K in (10, 100, 399):
        assert math.fsum(gen_binomial_table(alpha, K)) == pytest.approx(gen_binomial(alpha - 1, K), rel=1e-11)


def test_hyp1f2_examples(derived):
    assert hyp1f2(0.3, 0.7, 1.9, 0.0) == 1.0
    assert hyp1f2(0.75, 0.5, 1.75, -math.pi**2 / 4) == pytest.approx(derived["hyp1f2_0.75_0.5_1.75_j1"], abs=1e-10)
    assert hyp1f2(1.25, 1.5, 2.25, -9 * math.pi**2 / 4) == pytest.approx(derived["hyp1f2_1.25_1.5_2.25_j3"], abs=1e-10)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 1.5, 1.75])
@pytest.mark.parametrize("j", range(6))
def test_hyp1f2_in_series_range(alpha, j):
    z = -((j * math.pi) ** 2) / 4
    for a, b1, b2 in [((alpha + 1) / 2, 0.5, (alpha + 3) / 2), (alpha / 2 + 1, 1.5, alpha / 2 + 2)]:
        ref = float(mp.hyp1f2(a, b1, b2, z))
        assert hyp1f2(a, b1, b2, z) == pytest.approx(ref, abs=1e-10)


def test_hyp1f2_rejects_pole_parameters():
    with pytest.raises(DomainError):
        hyp1f2(1.0, -2.0, 1.5, -1.0)


def test_series_cap_raises_with_partial(monkeypatch):
    import levygen.specfun as sf

    monkeypatch.setattr(sf, "MAX_TERMS", 3)
    with pytest.raises(AccuracyError) as err:
        sf.hyp1f2(0.5, 0.5, 1.5, -50.0)
    assert err.value.partial is not None


def test_hyp2f1_neg1_examples(derived):
    assert hyp2f1_neg1(0.0, 1.3, 2.2) == 1.0
    assert hyp2f1_neg1(-1.0, 2.0, 3.0) == pytest.approx(5 / 3, rel=1e-15)
    assert hyp2f1_neg1(-0.5, 1.75, 2.75) == pytest.approx(derived["hyp2f1_neg1_-0.5_1.75_2.75"], abs=1e-11)


@given(st.sampled_from([0.25, 0.5, 0.75, 1.25, 1.5, 1.75]), st.integers(-40, 40))
@settings(max_examples=80, deadline=None)
def test_hyp2f1_neg1_matches_mpmath(alpha, j):
    a, b, c = -alpha, j - alpha / 2, j + 1 - alpha / 2
    with mp.workdps(40):
        ref = float(mp.hyp2f1(a, b, c, -1))
    assert hyp2f1_neg1(a, b, c) == pytest.approx(ref, abs=1e-11, rel=1e-11)


def test_gauss_examples(derived):
    a, b, c = -0.5, 1.75, 2.75
    closed = gauss_2f1_at_1(a, b, c)
    assert closed == pytest.approx(gamma_ratio(2.75, 3.25) * math.gamma(1.5), rel=1e-14)
    assert closed == pytest.approx(derived["gauss_direct_-0.5_1.75_2.75"], abs=1e-10)
    assert gauss_2f1_at_1(0.0, 0.4, 1.7) == 1.0
    assert gauss_2f1_at_1(-1.0, 1.0, 3.0) == pytest.approx(2 / 3, rel=1e-15)
    with pytest.raises(DomainError):
        gauss_2f1_at_1(1.0, 1.0, 1.5)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 1.25, 1.5, 1.75])
@pytest.mark.parametrize("j", range(9))
def test_gauss_identity_grid(alpha, j):
    a, b, c = -alpha, j - alpha / 2, j + 1 - alpha / 2
    assert gauss_2f1_at_1(a, b, c) == pytest.approx(gauss_direct_series(a, b, c), abs=1e-9)


def test_sine_integral_examples(derived):
    assert sine_integral(0.0) == 0.0
    assert sine_integral(-math.pi) == -sine_integral(math.pi)
    assert sine_integral(math.pi) == pytest.approx(derived["si_pi"], abs=1e-12)
    assert abs(sine_integral(100.0) - math.pi / 2) < 0.02
    assert abs(sine_integral(1e4) - math.pi / 2) < 2e-4


@given(st.floats(0.0, 1e4))
@settings(max_examples=200, deadline=None)
def test_sine_integral_matches_mpmath(x):
    assert sine_integral(x) == pytest.approx(float(mp.si(x)), abs=1e-12)
