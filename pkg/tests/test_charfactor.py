"""Index-factor goldens, character-sum cross-checks, regulator identity."""

import json
import math
import random

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import primerange

from hplus.charfactor import (
    best_pair,
    character_product,
    conjugate_log_magnitudes,
    gcd_over_pairs,
    index_factor,
    regulator_identity_check,
    rescreen_sequence,
)
from hplus.modarith import all_primitive_roots, find_primitive_root


@pytest.fixture(scope="module")
def report_7_67():
    return gcd_over_pairs(7, 67)


def test_index_factor_7_67_best_pair_value():
    f = index_factor(7, 67, 3, 7)
    assert f.value == 2**98 * 17**2
    assert f.two_exponent == 98
    assert f.odd_factors == ((17, 2),)
    assert f.cofactor == 1
    assert f.group_order == 198
    assert abs(f.product_p * f.product_q) == f.value * 2 * 198


def test_gcd_7_67_is_two_power(report_7_67):
    assert report_7_67.gcd_value == 2**32
    assert report_7_67.gcd_two_exponent == 32
    assert report_7_67.gcd_odd_small == ()
    assert report_7_67.gcd_cofactor == 1
    assert len(report_7_67.per_pair) == 40


def test_gcd_divides_every_pair(report_7_67):
    for f in report_7_67.per_pair.values():
        assert f.value % report_7_67.gcd_value == 0


def test_best_pair_and_rescreen_order(report_7_67):
    bp = best_pair(report_7_67)
    assert bp == (3, 7)
    seq = rescreen_sequence(report_7_67, bp)
    assert seq[0] == (3, 7)
    assert seq[1] == (5, 7)
    assert seq[2:6] == [(3, 2), (3, 11), (3, 12), (3, 13)]
    assert sorted(seq) == sorted(report_7_67.per_pair)


def test_rescreen_kills_seventeen(report_7_67):
    seq = rescreen_sequence(report_7_67, best_pair(report_7_67))
    alive = next(
        gh for gh in seq if report_7_67.per_pair[gh].l_adic_valuation(17) == 0
    )
    assert alive == (5, 7)


def test_gcd_17_37_contains_3_to_4_times_19():
    rep = gcd_over_pairs(17, 37)
    assert rep.l_adic_valuation(3) >= 4
    assert rep.l_adic_valuation(19) >= 1
    assert rep.gcd_odd_small == ((3, 4), (19, 1))


def test_gcd_19_43_odd_small_part_trivial():
    rep = gcd_over_pairs(19, 43)
    assert rep.gcd_odd_small == ()
    assert rep.gcd_cofactor == 1


def test_two_adic_lower_bound(report_7_67):
    for (p, q), rep in [((7, 67), report_7_67), ((5, 13), gcd_over_pairs(5, 13))]:
        n_p, n_q = (p - 1) // 2, (q - 1) // 2
        two_g = 2 * (p - 1) * (q - 1) // 2
        v2 = 0
        while two_g % 2 == 0:
            two_g //= 2
            v2 += 1
        bound = n_p + n_q - 2 - v2
        for f in rep.per_pair.values():
            assert f.two_exponent >= bound


def test_trivial_conductor_gives_one():
    assert character_product(3, 5, 2) == 1
    assert character_product(3, 107, 2) == 1


@pytest.mark.parametrize("p,q,g", [(7, 67, 3), (11, 31, 2), (17, 37, 3)])
def test_gamma_choice_is_irrelevant(p, q, g):
    values = {
        character_product(p, q, g, gamma=gamma) for gamma in all_primitive_roots(p)
    }
    assert len(values) == 1


def test_serialize_shape(report_7_67):
    blob = json.loads(json.dumps(report_7_67.serialize()))
    assert blob["gcd"] == {"factors": [[2, 32]], "cofactor": False}
    assert len(blob["pairs"]) == 40
    first = blob["pairs"][0]
    assert first["g"] == 3 and first["h"] == 2
    assert all(
        isinstance(s, int) and isinstance(e, int)
        for row in blob["pairs"]
        for s, e in row["factors"]
    )


def _character_product_float(p, q, g, prec=200):
    """Direct complex product over the nontrivial even characters mod p."""
    with mpmath.workprec(prec):
        gamma = find_primitive_root(p)
        ind, acc = {}, 1
        for e in range(p - 1):
            ind[acc] = e
            acc = acc * gamma % p
        out = mpmath.mpc(1)
        for j in range(2, p - 1, 2):
            def chi(a):
                return mpmath.expjpi(mpmath.mpf(2 * j * ind[a % p]) / (p - 1))
            out *= 2 * (chi(q) ** -1 - 1) + (chi(g) ** -1 - 1) * (q - 1)
        return out


def test_resultant_matches_complex_product():
    rng = random.Random(0x5EED)
    primes = list(primerange(3, 50))
    for _ in range(100):
        p, q = rng.sample(primes, 2)
        g = rng.choice(all_primitive_roots(p))
        exact = character_product(p, q, g)
        approx = _character_product_float(p, q, g)
        assert abs(approx.imag) < 1e-30 * max(1, abs(exact))
        assert abs(approx.real - exact) < 1e-30 * max(1, abs(exact))


@given(st.sampled_from([(5, 7), (7, 11), (5, 13), (13, 7)]), st.data())
@settings(max_examples=20, deadline=None)
def test_index_factor_is_integral(pq, data):
    p, q = pq
    g = data.draw(st.sampled_from(all_primitive_roots(p)))
    h = data.draw(st.sampled_from(all_primitive_roots(q)))
    f = index_factor(p, q, g, h)
    assert f.value * 2 * f.group_order == abs(f.product_p * f.product_q)
    assert f.value % 2**f.two_exponent == 0
    rebuilt = 2**f.two_exponent * f.cofactor
    for s, e in f.odd_factors:
        rebuilt *= s**e
    assert rebuilt == f.value


@pytest.mark.parametrize("p,q", [(3, 5), (3, 7), (5, 7)])
def test_regulator_identity(p, q):
    g, h = find_primitive_root(p), find_primitive_root(q)
    assert regulator_identity_check(p, q, g, h, precision=128) < 1e-20


def test_regulator_identity_nonminimal_roots():
    assert regulator_identity_check(5, 7, 3, 5, precision=128) < 1e-20


@pytest.mark.parametrize("p,q,g,h", [(3, 5, 2, 2), (5, 7, 2, 3), (7, 11, 3, 2)])
def test_conjugate_log_magnitudes_sum_to_zero(p, q, g, h):
    with mpmath.workprec(128):
        logs = conjugate_log_magnitudes(p, q, g, h)
        assert len(logs) == (p - 1) * (q - 1) // 2
        assert all(2 * a < p * q and math.gcd(a, p * q) == 1 for a in logs)
        assert abs(mpmath.fsum(logs.values())) < mpmath.mpf(2) ** -90
