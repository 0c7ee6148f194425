import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weylcount import spectra
from weylcount.spectra import Factor, cum_mult, eigen_sq, mult, poly_P


@pytest.mark.parametrize("d, k, expected", [(2, 1, 2), (5, 0, 0), (1, 0, 0), (3, 4, 24)])
def test_eigen_sq_examples(d, k, expected):
    assert eigen_sq(Factor(d), k) == expected


@pytest.mark.parametrize("d, k, expected", [(2, 5, 11), (2, 0, 1), (3, 2, 9), (1, 3, 2), (1, 0, 1)])
def test_mult_examples(d, k, expected):
    assert mult(Factor(d), k) == expected


def test_factor_rejects_nonpositive():
    with pytest.raises(ValueError):
        Factor(0)
    with pytest.raises(ValueError):
        Factor(-2)


def test_mult_matches_harmonic_polynomial_dimension():
    # dim of degree-k harmonics in d+1 variables: C(k+d, d) - C(k+d-2, d)
    for d in range(2, 7):
        for k in range(0, 30):
            homog = math.comb(k + d, d)
            lower = math.comb(k + d - 2, d) if k >= 2 else 0
            assert mult(d, k) == homog - lower


def test_levels_basic_properties():
    for d in range(1, 7):
        prev = -1
        for k in range(0, 201):
            e = eigen_sq(d, k)
            assert e > prev
            prev = e
            m = mult(d, k)
            assert m >= 1
            if d == 1:
                assert m in (1, 2)


def test_poly_examples():
    P1 = poly_P(2)
    assert P1.coefficients == (0, 2)
    assert P1(Fraction(5, 2)) == 5 == mult(2, 2)

    P2 = poly_P(3)
    assert P2.coefficients == (0, 0, 1)
    assert P2(3) == 9 == mult(3, 2)

    P3 = poly_P(4)
    assert P3.coefficients == (0, Fraction(-1, 12), 0, Fraction(1, 3))
    assert P3(Fraction(3, 2)) == 1 == mult(4, 0)


def test_poly_rejects_low_dim():
    with pytest.raises(ValueError):
        poly_P(1)


@pytest.mark.parametrize("d", range(2, 7))
def test_poly_reproduces_multiplicity(d):
    P = poly_P(d)
    for k in range(2, 201):
        assert P.at_level(k) == mult(d, k)


@pytest.mark.parametrize("d", range(2, 7))
def test_poly_leading_and_parity(d):
    P = poly_P(d)
    assert P.degree == d - 1
    assert P.leading == Fraction(2, math.factorial(d - 1))
    for i, c in enumerate(P.coefficients):
        if c != 0:
            assert i % 2 == (d - 1) % 2


def test_poly_identity_below_claimed_range():
    # observation only: for d = 2, 3 the identity also holds at k = 0, 1
    for d in (2, 3):
        for k in (0, 1):
            assert poly_P(d).at_level(k) == mult(d, k)


@pytest.mark.parametrize("d, T, expected", [(2, 6, 9), (1, 4, 5), (3, 0, 1), (2, Fraction(11, 2), 4)])
def test_cum_mult_examples(d, T, expected):
    assert cum_mult(d, T) == expected


@settings(max_examples=500, deadline=None)
@given(st.integers(1, 8), st.fractions(min_value=0, max_value=5000, max_denominator=7))
def test_cum_mult_equals_direct_sum(d, T):
    total = 0
    k = 0
    while k * (k + d - 1) <= T:
        total += mult(d, k)
        k += 1
    assert cum_mult(d, T) == total


@given(st.integers(1, 10), st.integers(0, 10**6))
def test_max_level_is_exact(d, t):
    K = spectra.max_level(d, t)
    assert K * (K + d - 1) <= t < (K + 1) * (K + d)
