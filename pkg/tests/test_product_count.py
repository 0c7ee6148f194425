import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weylcount import product_count as pc
from weylcount import spectra
from weylcount.product_count import (
    DimsParseError,
    ProductManifold,
    brute_count,
    count,
    parse_dims,
    reduction_chain,
    weyl_constant,
)


def test_parse_examples():
    M = parse_dims("2,1")
    assert M.dims == (2, 1) and M.k == 1 and M.total_dim == 3
    assert M.shift == (Fraction(1, 2), 0)
    assert parse_dims("1,3").dims == (3, 1)
    assert parse_dims("1,3").order == (1, 0)


def test_parse_is_stable_within_groups():
    M = parse_dims(" 1, 2,1,4 ,3")
    assert M.dims == (2, 4, 3, 1, 1)
    assert M.order == (1, 3, 4, 0, 2)


@pytest.mark.parametrize("text, bad", [("2,0", "0"), ("", ""), ("3,-1", "-1"), ("2,x", "x"), ("2.5", "2.5"), ("2,,1", "")])
def test_parse_rejects(text, bad):
    with pytest.raises(DimsParseError) as info:
        parse_dims(text)
    assert info.value.token == bad


def test_manifold_rejects_unnormalized():
    with pytest.raises(ValueError):
        ProductManifold((1, 2))


def test_shift_is_zero_exactly_on_circles():
    M = parse_dims("4,3,2,1,1")
    for d, y in zip(M.dims, M.shift):
        assert y == Fraction(d - 1, 2)
        assert (y == 0) == (d == 1)


@pytest.mark.parametrize("dims, lam_sq, expected", [("1,1", 2, 9), ("2", 100, 100), ("2,1", 2, 6), ("1,1,1", 0, 1)])
def test_count_examples(dims, lam_sq, expected):
    assert count(dims, lam_sq).value == expected
    assert brute_count(dims, lam_sq).value == expected


def test_count_3_2_matches_brute():
    assert count("3,2", 9).value == brute_count("3,2", 9).value


def test_count_rejects_negative():
    with pytest.raises(ValueError):
        count("2", -1)


def test_count_only_depends_on_floor():
    # eigenvalue squares are integers, so N(lam^2) = N(floor(lam^2))
    assert count("2,1", Fraction(77, 2)).value == count("2,1", 38).value
    assert count("2,1", "38.999").value == count("2,1", 38).value


def test_oracle_equivalence_random():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(1, 3)
        dims = [rng.randint(1, 4) for _ in range(n)]
        lam_sq = Fraction(rng.randint(0, 900 * 4), 4)
        M = ProductManifold.from_dims(dims)
        assert count(M, lam_sq).value == brute_count(M, lam_sq).value


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=3),
       st.lists(st.integers(0, 400), min_size=2, max_size=6))
def test_monotone_in_lambda(dims, ts):
    ts = sorted(ts)
    vals = [count(dims, t).value for t in ts]
    assert vals == sorted(vals)


def test_closed_form_s2():
    # a single sweep over lam^2 = 1..10^4, K from the running level
    K = 0
    for t in range(1, 10 ** 4 + 1):
        while (K + 1) * (K + 2) <= t:
            K += 1
        assert count("2", t).value == (K + 1) ** 2


def test_closed_form_s3():
    J = 1
    for t in range(1, 10 ** 4 + 1):
        while J * (J + 2) <= t:  # level k = J satisfies k(k+2) <= t
            J += 1
        assert count("3", t).value == J * (J + 1) * (2 * J + 1) // 6


def test_closed_forms_checked_against_brute():
    for t in (0, 1, 2, 5, 6, 11, 12, 99, 100, 500):
        K = spectra.max_level(2, t)
        assert brute_count("2", t).value == (K + 1) ** 2
        J = spectra.max_level(3, t) + 1
        assert brute_count("3", t).value == J * (J + 1) * (2 * J + 1) // 6


@pytest.mark.parametrize("a, b", [(2, 1), (3, 2), (4, 4), (1, 1), (5, 3)])
def test_tensor_consistency(a, b):
    M = ProductManifold.from_dims([a, b])
    for t in (0, 3, 17, 60, 250):
        direct = 0
        k = 0
        while spectra.eigen_sq(a, k) <= t:
            direct += spectra.mult(a, k) * spectra.cum_mult(b, t - spectra.eigen_sq(a, k))
            k += 1
        assert count(M, t).value == direct


@pytest.mark.parametrize("dims, expected", [("2", 1.0), ("3", 1 / 3), ("2,1", 4 / 3), ("1", 2.0), ("1,1", math.pi)])
def test_weyl_constant_examples(dims, expected):
    assert weyl_constant(dims) == pytest.approx(expected, rel=1e-12)


def _all_dims(max_n=4, max_d=5):
    out = []

    def rec(prefix):
        if prefix:
            out.append(tuple(prefix))
        if len(prefix) < max_n:
            for d in range(1, max_d + 1):
                if prefix and d > prefix[-1]:
                    continue
                rec(prefix + [d])

    rec([])
    return out


def test_constant_consistency_all_small_dims():
    for dims in _all_dims():
        M = ProductManifold.from_dims(dims)
        w, c = pc.lattice_main_term(M), weyl_constant(M)
        assert abs(w - c) / c <= 1e-9, dims


def test_weyl_remainder_identity():
    N, main, err = pc.weyl_remainder("2,1", 1000)
    assert N == count("2,1", 1000).value
    assert err == pytest.approx(N - main, abs=1e-6)


def test_reduction_chain_circles_only():
    for lam in (1, 3.5, 10):
        ch = reduction_chain("1,1", lam)
        assert ch.N == ch.N1 == ch.N2 == ch.N3


def test_reduction_chain_2_1_at_40():
    ch = reduction_chain("2,1", 40)
    assert ch.N - ch.N1 > 0
    assert ch.N1 <= ch.N


@pytest.mark.parametrize("dims", ["2,1", "3,1", "2,2", "4,1", "3,2", "4,2,1"])
def test_reduction_chain_orderings(dims):
    for lam in (5, 12.5, 20):
        ch = reduction_chain(dims, lam)
        assert ch.N1 <= ch.N
        assert ch.N2 >= 0 and ch.N3 >= ch.N2


@pytest.mark.parametrize("dims", ["2,1", "2,2", "3,1", "3,3,1"])
def test_reduction_exact_for_monomial_multiplicities(dims):
    # for d = 2, 3 the multiplicity is exactly 2/(d-1)! (k + (d-1)/2)^(d-1) at every k,
    # and the levels k = 0, 1 of N3 carry exactly their multiplicities
    for lam in (7, 20, 33.25):
        ch = reduction_chain(dims, lam)
        assert ch.N3 == ch.N


def test_reduction_chain_4_1_differs():
    ch = reduction_chain("4,1", 40)
    assert ch.N3 != ch.N
