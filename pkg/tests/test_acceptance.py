"""Release gate: one test per published verdict class.

Every assertion is exact integer or string equality unless a tolerance
is named here: REGULATOR_TOL bounds the analytic regulator residual,
FLOAT_TOL the relative gap between the resultant route and the direct
complex product, MIN_DIGITS_1355 the certified precision floor for the
5*271 quartic.  Conductor-scale tests replay committed Frobenius caches;
every Howell form, Groebner basis, and certificate is recomputed.
"""

import dataclasses
import random
import shutil
from pathlib import Path

import pytest

from test_charfactor import _character_product_float
from test_step3 import P469, P469_SUB9, P1355, P1477

from hplus import groebner as gb
from hplus.charfactor import (
    best_pair,
    character_product,
    gcd_over_pairs,
    index_factor,
    regulator_identity_check,
)
from hplus.errors import DivisionFailed
from hplus.frobenius import (
    EtaContext,
    FrobeniusCache,
    frobenius_polynomial_full,
    frobenius_polynomial_restricted,
)
from hplus.grpring import GroupRingElement, RingShape, conjugation_relation
from hplus.modarith import (
    all_primitive_roots,
    dlog_mu_M,
    find_primitive_root,
    search_split_primes,
    witness_for_prime,
)
from sympy import primerange
from hplus.pipeline import (
    RunConfig,
    STATUS_INCONCLUSIVE,
    STATUS_NOT_DIVIDING,
    STATUS_PROVED,
    degree_grid,
    resolve_l,
    run,
    step1,
    step2,
)
from hplus.step3 import IntegerPolynomial, verify_power
from test_frobenius import TABLES

DATA = Path(__file__).parent / "data"

REGULATOR_TOL = 1e-20
FLOAT_TOL = 1e-30
MIN_DIGITS_1355 = 7000

CTX_469 = EtaContext.standard(7, 67, 3, 7)


def _warm_config(tmp_path, name, **kwargs):
    path = tmp_path / name
    shutil.copy(DATA / name, path)
    return RunConfig(cache_path=str(path), **kwargs)


@pytest.fixture(scope="module")
def records_469():
    """The printed-table records, one per (split prime, modulus)."""
    out = {}
    for row in TABLES:
        shape = RingShape.cell(7, 67, row["M"], 2, 2)
        w = witness_for_prime(row["r"], 7, 67, row["M"])
        out[(row["r"], row["M"])] = frobenius_polynomial_restricted(
            CTX_469, w, shape
        )
    return out


@pytest.mark.slow
def test_conductor_469_end_to_end(tmp_path):
    config = _warm_config(tmp_path, "cache469full.jsonl", p=7, q=67,
                          l_bound=100)
    report = run(config)

    gcd = gcd_over_pairs(7, 67)
    assert gcd.gcd_value == 2**32
    assert gcd.gcd_odd_small == () and gcd.gcd_cofactor == 1

    flagged = {r["l"] for r in report["reports"] if r["flagged"]}
    assert flagged == {3, 17}

    r17 = next(r for r in report["reports"] if r["l"] == 17)
    assert r17["status"] == STATUS_NOT_DIVIDING
    assert r17["rescreen"]["pair"] == [5, 7]
    assert r17["rescreen"]["survived"] is False

    r3 = next(r for r in report["reports"] if r["l"] == 3)
    assert r3["escalation"]["2,2"] == {"stable_M": 9, "orders": [3, 9, 9]}
    assert r3["status"] == STATUS_PROVED
    assert r3["h_plus_l_part"] == 9

    cache = FrobeniusCache(config.cache_path)
    cell = next(c for c in degree_grid(7, 67, 3) if c.key == (2, 2))
    esc = step2(3, cell, config, CTX_469, cache,
                first=step1(3, cell, config, CTX_469, cache))
    sh3, sh9 = cell.shape(3), cell.shape(9)
    assert gb.ideal_equal(
        esc.ideals_by_M[3].ideal,
        gb.ideal([GroupRingElement(sh3, {(0, 2): 1, (0, 0): -1}),
                  GroupRingElement(sh3, {(0, 1): 1, (1, 0): -1})], sh3),
    )
    assert gb.ideal_equal(
        esc.ideal,
        gb.ideal([GroupRingElement(sh9, {(0, 2): 1, (0, 1): -3, (0, 0): 2}),
                  GroupRingElement(sh9, {(0, 0): 3, (1, 0): -1, (0, 1): -2})],
                 sh9),
    )

    cert = next(
        c for c in r3["step3"]["certificates"]
        if tuple(int(v) for v in c["polynomial"]) == P469
    )
    assert cert["divides"] is True
    norm = IntegerPolynomial(tuple(int(c) for c in cert["norm_polynomial"]))
    assert verify_power(IntegerPolynomial(P469), norm, 9)
    spread = norm.substitute_power(9).coefficients
    for degree, value in P469_SUB9.items():
        assert spread[degree] == value

    assert report["table_row"] == {
        "f": "7*67", "GCD": "1", "l": "3", "Degree": "(6,6)", "h+": "3^2",
    }


def test_frobenius_printed_tables(records_469):
    by_prime = {}
    for row in TABLES:
        rec = records_469[(row["r"], row["M"])]
        shape = RingShape.cell(7, 67, row["M"], 2, 2)
        printed = GroupRingElement.from_triples(
            shape, [tuple(t) for t in row["coeffs"]]
        )
        assert rec.poly == printed
        by_prime.setdefault(row["r"], {})[row["M"]] = rec
    assert len(by_prime) == 6 and all(
        set(recs) == {3, 9, 27} for recs in by_prime.values()
    )
    sh3 = RingShape.cell(7, 67, 3, 2, 2)
    for recs in by_prime.values():
        reduced = GroupRingElement.from_triples(
            sh3, recs[27].poly.to_triples()
        )
        assert reduced == recs[3].poly


@pytest.mark.slow
def test_conductor_1355_quartic(tmp_path):
    config = _warm_config(tmp_path, "cache1355.jsonl", p=5, q=271,
                          l_only=(37,))
    gcd = gcd_over_pairs(5, 271)
    pair = best_pair(gcd)
    assert pair == (2, 15)
    ctx = EtaContext.standard(5, 271, *pair)
    cache = FrobeniusCache(config.cache_path)

    cell = next(c for c in degree_grid(5, 271, 37) if c.key == (4, 18))
    esc = step2(37, cell, config, ctx, cache,
                first=step1(37, cell, config, ctx, cache))
    assert esc.stable_M == 37
    sh = cell.shape(37)
    printed = gb.ideal(
        [GroupRingElement(sh, {(0, 0): 9, (0, 1): 27, (0, 2): 1}),
         GroupRingElement(sh, {(0, 0): 8, (1, 0): 1, (0, 1): 28})],
        sh,
    )
    assert gb.ideal_equal(esc.ideal, printed)

    rpt = resolve_l(37, config, ctx, gcd, cache)
    assert rpt.status == STATUS_PROVED
    assert rpt.h_plus_l_part == 37
    cert = next(
        c for c in rpt.step3["certificates"]
        if tuple(int(v) for v in c["polynomial"]) == P1355
    )
    assert cert["divides"] is True
    assert len(str(P1355[2])) == 113
    assert len(str(-P1355[1])) == 57
    assert cert["precision_digits"] >= MIN_DIGITS_1355


@pytest.mark.slow
def test_conductor_1477_phi_pairs(tmp_path):
    config = _warm_config(tmp_path, "cache1477.jsonl", p=7, q=211,
                          l_only=(7,))
    gcd = gcd_over_pairs(7, 211)
    pair = best_pair(gcd)
    ctx = EtaContext.standard(7, 211, *pair)
    cache = FrobeniusCache(config.cache_path)
    rpt = resolve_l(7, config, ctx, gcd, cache)

    labels = {p.label: p.order for p in rpt.phi_pairs}
    assert labels == {"(x+3,y-1)": 7, "(x+4,y+4)": 7, "(x+5,y-1)": 7}
    assert rpt.B_order_l == 343
    assert rpt.P_valuation == 2
    assert rpt.status == STATUS_PROVED
    assert rpt.h_plus_l_part == 7
    cert = next(
        c for c in rpt.step3["certificates"]
        if tuple(int(v) for v in c["polynomial"]) == P1477
    )
    assert cert["divides"] is True
    assert cert["prefactors"] == [["x", 3], ["y", 3], ["y", 21]]


@pytest.mark.slow
@pytest.mark.parametrize(
    "p,q,cache_name,row",
    [
        (3, 107, "cache321.jsonl",
         {"f": "3*107", "GCD": "1", "l": "3", "Degree": "(2,2)", "h+": "3"}),
        (3, 331, "cache993.jsonl",
         {"f": "3*331", "GCD": "1", "l": "3", "Degree": "(2,6)",
          "h+": "3^2"}),
        (19, 29, "cache551.jsonl",
         {"f": "19*29", "GCD": "5", "l": "-", "Degree": "(2,4)", "h+": "5"}),
        (13, 37, "cache481.jsonl",
         {"f": "13*37", "GCD": "7*19", "l": "-", "Degree": "(6,18)",
          "h+": "19"}),
    ],
    ids=["321", "993", "551", "481"],
)
def test_published_table_rows(tmp_path, p, q, cache_name, row):
    config = _warm_config(tmp_path, cache_name, p=p, q=q, l_bound=100)
    report = run(config)
    assert report["table_row"] == row
    assert all(
        r["status"] != STATUS_INCONCLUSIVE for r in report["reports"]
    )


def test_index_factor_suite():
    f = index_factor(7, 67, 3, 7)
    assert f.value == 2**98 * 17**2
    assert f.cofactor == 1

    gcd = gcd_over_pairs(7, 67)
    assert gcd.gcd_value == 2**32 and gcd.gcd_odd_small == ()

    wide = gcd_over_pairs(17, 37)
    assert wide.l_adic_valuation(3) >= 4
    assert wide.l_adic_valuation(19) >= 1

    rng = random.Random(0xACCE97)
    primes = list(primerange(3, 50))
    for _ in range(100):
        p, q = rng.sample(primes, 2)
        g = rng.choice(all_primitive_roots(p))
        exact = character_product(p, q, g)
        approx = _character_product_float(p, q, g)
        assert abs(approx.imag) < FLOAT_TOL * max(1, abs(exact))
        assert abs(approx.real - exact) < FLOAT_TOL * max(1, abs(exact))


@pytest.mark.slow
def test_cross_engine_properties(records_469):
    # (a) membership and quotient order agree across both ideal engines
    shapes = [
        RingShape.cell(13, 7, 3, 1, 2),
        RingShape.cell(13, 7, 9, 2, 2),
        RingShape.cell(29, 43, 7, 1, 1),
        RingShape.cell(7, 67, 27, 2, 2),
        RingShape.cell(11, 31, 5, 2, 1),
    ]
    rng = random.Random(0x1DEA15)

    def element(shape):
        return GroupRingElement.from_triples(shape, [
            (rng.randrange(shape.D1), rng.randrange(shape.D2),
             rng.randrange(1, shape.M))
            for _ in range(rng.randint(1, 4))
        ])

    for trial in range(1000):
        shape = shapes[trial % len(shapes)]
        gens = [element(shape) for _ in range(rng.randint(1, 3))]
        probes = [element(shape) for _ in range(2)]
        handle = gb.ideal(gens, shape)
        basis = handle.groebner_basis()
        member = sum((g * f for g, f in zip(gens, probes)),
                     GroupRingElement.zero(shape))
        assert handle.contains(member) and basis.contains(member)
        for f in probes:
            assert handle.contains(f) == basis.contains(f)
        small = gb.ideal([g * f for g in gens for f in probes], shape)
        gb.quotient_order(handle, small, engines=("howell", "groebner"))

    # (b) every record's augmentation value vanishes
    for (r, M), rec in records_469.items():
        assert rec.poly.evaluate(1, 1) == 0
        assert frobenius_polynomial_full(
            CTX_469, witness_for_prime(r, 7, 67, M)
        ).poly.evaluate(1, 1) == 0

    # (c) the chain ideal does not depend on the dlog base
    trials = 0
    for (r, M), rec in sorted(records_469.items()):
        if M == 3:
            continue
        shape = rec.poly.shape
        cnj = conjugation_relation(shape)
        base = gb.ideal([rec.poly, cnj], shape)
        for t in (2, 4, 5, 7, 8):
            if trials >= 50:
                break
            w = witness_for_prime(r, 7, 67, M)
            alt = dataclasses.replace(w, zeta_M=pow(w.zeta_M, t, w.r))
            other = frobenius_polynomial_restricted(CTX_469, alt, shape)
            assert gb.ideal_equal(
                base, gb.ideal([other.poly, cnj], shape)
            )
            trials += 1
    assert trials == 50

    # (d) analytic regulator identity at 128-bit precision
    for p, q in ((3, 5), (3, 7), (5, 7)):
        g, h = find_primitive_root(p), find_primitive_root(q)
        assert regulator_identity_check(p, q, g, h, precision=128) \
            < REGULATOR_TOL

    # (e) dlog round trip, exhaustive through M = 81
    for M in (3, 9, 27, 81):
        (w,) = search_split_primes(3, 5, M, count=1)
        for s in range(M):
            assert dlog_mu_M(pow(w.zeta_M, s, w.r), w.zeta_M, M, w.r) == s


def test_negative_control(tmp_path, monkeypatch):
    small = IntegerPolynomial((1, -3, 1))
    with pytest.raises(DivisionFailed):
        verify_power(small, small, 3)

    def refuse(ctx, gen, precision=None, precision_cap=None):
        raise DivisionFailed("synthetic non-power unit")

    monkeypatch.setattr("hplus.pipeline.step3_certificate", refuse)
    config = _warm_config(tmp_path, "cache469.jsonl", p=7, q=67, l_only=(3,))
    gcd = gcd_over_pairs(7, 67)
    cache = FrobeniusCache(config.cache_path)
    rpt = resolve_l(3, config, CTX_469, gcd, cache)
    assert rpt.status == STATUS_INCONCLUSIVE
    assert rpt.h_plus_l_part is None
    assert rpt.step3["failures"]
    assert rpt.step3["certificates"] == []
