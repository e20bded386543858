"""Primitive roots, split-prime search, and subgroup discrete logs."""

import pytest
from hypothesis import given, strategies as st
from sympy import isprime, totient

from hplus.errors import NotInSubgroup, SearchExhausted
from hplus.modarith import (
    PrimeField,
    ResidueRing,
    all_primitive_roots,
    dlog_mu_M,
    find_primitive_root,
    has_exact_order,
    prime_power_split,
    search_split_primes,
    witness_for_prime,
)

# the published witness list for (7, 67) at M = 27: first six split primes
# past 7e6, with the smallest primitive root of each
PRINTED_WITNESSES = [
    (7521823, 3),
    (8889427, 2),
    (9573229, 2),
    (10257031, 11),
    (20514061, 2),
    (22565467, 3),
]


@pytest.mark.parametrize(
    "n, g",
    [(3, 2), (5, 2), (7, 3), (67, 2), (107, 2), (331, 3)],
)
def test_find_primitive_root_smallest(n, g):
    assert find_primitive_root(n) == g


@pytest.mark.parametrize("n", [2, 4, 9, 15])
def test_find_primitive_root_rejects_non_odd_primes(n):
    with pytest.raises(ValueError):
        find_primitive_root(n)


def test_all_primitive_roots_small():
    assert all_primitive_roots(5) == [2, 3]
    assert all_primitive_roots(7) == [3, 5]


def test_all_primitive_roots_count_67():
    roots = all_primitive_roots(67)
    assert len(roots) == totient(66) == 20
    assert roots == sorted(set(roots))
    assert all(has_exact_order(g, 66, 67) for g in roots)


@given(st.sampled_from([3, 5, 7, 11, 13, 23, 47, 59, 83, 103, 107, 167, 179]))
def test_all_primitive_roots_orders(n):
    roots = all_primitive_roots(n)
    assert len(roots) == totient(n - 1)
    for g in roots:
        assert has_exact_order(g, n - 1, n)


def test_prime_power_split():
    assert prime_power_split(27) == (3, 3)
    assert prime_power_split(49) == (7, 2)
    assert prime_power_split(5) == (5, 1)
    for bad in (1, 12, 18, 100):
        with pytest.raises(ValueError):
            prime_power_split(bad)


def test_residue_ring_rejects_even_and_composite_moduli():
    assert ResidueRing.from_modulus(9) == ResidueRing(9, 3, 2)
    with pytest.raises(ValueError):
        ResidueRing.from_modulus(8)
    with pytest.raises(ValueError):
        ResidueRing(9, 3, 3)


def test_prime_field_basics():
    field = PrimeField(31)
    assert field.inverse(7) * 7 % 31 == 1
    assert field.multiplicative_order(3) == 30
    assert field.multiplicative_order(2) == 5
    with pytest.raises(ValueError):
        PrimeField(33)


@pytest.fixture(scope="module")
def printed_search():
    return search_split_primes(7, 67, 27, count=6, start=7_000_000)


def test_search_reproduces_published_primes(printed_search):
    assert [w.r for w in printed_search] == [r for r, _ in PRINTED_WITNESSES]
    assert [w.t for w in printed_search] == [t for _, t in PRINTED_WITNESSES]


def test_search_witness_invariants(printed_search):
    for w in printed_search:
        assert isprime(w.r)
        assert (w.r - 1) % (7 * 67) == 0
        assert (w.r - 1) % (2 * 27) == 0
        assert (w.r - 1) // 27 % 2 == 0
        assert has_exact_order(w.zeta_p, 7, w.r)
        assert has_exact_order(w.zeta_q, 67, w.r)
        assert has_exact_order(w.zeta_M, 27, w.r)


def test_search_is_deterministic(printed_search):
    again = search_split_primes(7, 67, 27, count=6, start=7_000_000)
    assert again == printed_search


def test_search_smallest_case():
    (w,) = search_split_primes(3, 5, 3, count=1)
    assert w.r == 181


def test_hand_built_witness_outside_search_progression():
    # 31 = 1 mod 15 and mod 6, a valid witness the stricter search skips
    w = witness_for_prime(31, 3, 5, 3)
    assert w.t == 3
    assert has_exact_order(w.zeta_p, 3, 31)
    assert has_exact_order(w.zeta_q, 5, 31)
    assert has_exact_order(w.zeta_M, 3, 31)


def test_search_exhausts_at_cap():
    with pytest.raises(SearchExhausted):
        search_split_primes(7, 67, 27, count=7, start=7_000_000, r_cap=23_000_000)


def test_search_rejects_bad_pairs():
    for p, q in [(7, 7), (2, 67), (9, 67)]:
        with pytest.raises(ValueError):
            search_split_primes(p, q, 27, count=1)


def test_dlog_identity_and_base(printed_search):
    w = printed_search[0]
    assert dlog_mu_M(1, w.zeta_M, 27, w.r) == 0
    assert dlog_mu_M(w.zeta_M, w.zeta_M, 27, w.r) == 1


@pytest.mark.parametrize("M", [3, 9, 27, 81])
def test_dlog_round_trip_exhaustive(M):
    (w,) = search_split_primes(3, 5, M, count=1)
    for s in range(M):
        assert dlog_mu_M(pow(w.zeta_M, s, w.r), w.zeta_M, M, w.r) == s


def test_dlog_rejects_outside_subgroup(printed_search):
    w = printed_search[0]
    with pytest.raises(NotInSubgroup):
        dlog_mu_M(w.t, w.zeta_M, 27, w.r)


@given(st.integers(0, 26), st.integers(0, 26))
def test_dlog_is_a_homomorphism(a, b):
    w = witness_for_prime(7521823, 7, 67, 27)
    v = pow(w.zeta_M, a, w.r) * pow(w.zeta_M, b, w.r) % w.r
    assert dlog_mu_M(v, w.zeta_M, 27, w.r) == (a + b) % 27
