"""Group-ring shapes and sparse cyclic-polynomial arithmetic."""

import pytest
from hypothesis import given, settings, strategies as st

from hplus import kernels
from hplus.errors import ShapeMismatch, ZeroPolynomial
from hplus.grpring import (
    GroupRingElement,
    RingShape,
    augmentation_ideal_generators,
    conjugation_relation,
    leading_term,
    scale_exponents,
)

SHAPES = [
    RingShape.cell(13, 7, 3, 1, 2),
    RingShape.cell(13, 7, 9, 2, 2),
    RingShape.cell(11, 31, 5, 2, 2),
    RingShape.cell(29, 43, 7, 1, 1),
    RingShape.cell(7, 67, 27, 2, 2),
]


def elements(shape, max_terms=5):
    triple = st.tuples(
        st.integers(0, shape.D1 - 1),
        st.integers(0, shape.D2 - 1),
        st.integers(0, shape.M - 1),
    )
    return st.lists(triple, max_size=max_terms).map(
        lambda t: GroupRingElement.from_triples(shape, t)
    )


def shaped_elements(n):
    return st.sampled_from(SHAPES).flatmap(
        lambda s: st.tuples(*[elements(s) for _ in range(n)])
    )


def test_full_shape_derivation():
    sh = RingShape.full(7, 67, 9)
    assert (sh.D1, sh.D2) == (6, 66)
    assert (sh.a1, sh.a2, sh.d1, sh.d2) == (1, 1, 2, 22)
    assert (sh.m1, sh.m2) == (2, 22)
    assert (sh.ell, sh.k, sh.rank) == (3, 2, 396)


def test_cell_shape_derivation():
    sh = RingShape.cell(7, 67, 9, 2, 2)
    assert (sh.D1, sh.D2) == (6, 6)
    assert sh.with_modulus(27).M == 27
    assert sh.with_modulus(27).D1 == 6


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(M=12, D1=6, D2=6, p=7, q=67, a1=1, a2=1, d1=2, d2=2),
        dict(M=8, D1=6, D2=6, p=7, q=67, a1=1, a2=1, d1=2, d2=2),
        dict(M=9, D1=6, D2=6, p=7, q=67, a1=1, a2=1, d1=3, d2=2),
        dict(M=9, D1=5, D2=6, p=7, q=67, a1=1, a2=1, d1=2, d2=2),
        dict(M=9, D1=12, D2=6, p=7, q=67, a1=1, a2=1, d1=4, d2=2),
    ],
)
def test_shape_validation_rejects(kwargs):
    with pytest.raises(ValueError):
        RingShape(**kwargs)


def test_conjugation_relation_cell():
    sh = RingShape.cell(7, 67, 9, 2, 2)
    assert conjugation_relation(sh).to_triples() == [(0, 0, 8), (3, 3, 1)]


def test_conjugation_relation_full():
    sh = RingShape.full(7, 67, 9)
    assert conjugation_relation(sh).to_triples() == [(0, 0, 8), (3, 33, 1)]


def test_augmentation_generators():
    sh = RingShape.cell(7, 67, 3, 2, 2)
    x1, y1 = augmentation_ideal_generators(sh)
    assert x1.to_triples() == [(0, 0, 2), (1, 0, 1)]
    assert y1.to_triples() == [(0, 0, 2), (0, 1, 1)]
    assert x1.evaluate() == 0 and y1.evaluate() == 0


def test_constructor_normalizes():
    sh = RingShape.cell(13, 7, 9, 2, 2)
    f = GroupRingElement.from_triples(sh, [(7, 6, 4), (0, 0, 3), (1, 0, -4)])
    # x^7 y^6 reduces to x, which cancels against the -4x term
    assert f.to_triples() == [(0, 0, 3)]
    assert not GroupRingElement.from_triples(sh, [(1, 1, 4), (1, 1, -4)]).terms


def test_exponent_wraparound():
    sh = RingShape.cell(13, 7, 3, 1, 2)
    x = GroupRingElement.monomial(sh, 1, 0)
    assert x**sh.D1 == GroupRingElement.constant(sh, 1)
    y = GroupRingElement.monomial(sh, 0, 1)
    assert y**sh.D2 == GroupRingElement.constant(sh, 1)


def test_leading_term_lex_x_over_y():
    sh = RingShape.cell(7, 67, 9, 2, 2)
    f = GroupRingElement.from_triples(sh, [(2, 1, 5), (1, 5, 7), (2, 0, 1)])
    assert leading_term(f) == ((2, 1), 5)
    with pytest.raises(ZeroPolynomial):
        leading_term(GroupRingElement.zero(sh))


def test_shape_mismatch_raises():
    a = GroupRingElement.constant(SHAPES[0], 1)
    b = GroupRingElement.constant(SHAPES[1], 1)
    with pytest.raises(ShapeMismatch):
        a + b
    with pytest.raises(ShapeMismatch):
        a * b


def test_text_rendering():
    sh = RingShape.cell(7, 67, 9, 2, 2)
    f = GroupRingElement.from_triples(sh, [(3, 3, 1)])
    assert f.to_text() == "x^3y^3"
    g = GroupRingElement.from_triples(sh, [(3, 3, 3), (3, 0, 6), (0, 0, 3)])
    assert g.to_text() == "x^3(3y^3+6) + 3"
    assert GroupRingElement.zero(sh).to_text() == "0"


def test_grid_roundtrip():
    sh = RingShape.cell(7, 67, 9, 2, 2)
    f = GroupRingElement.from_triples(sh, [(3, 3, 3), (1, 0, 6), (0, 5, 1)])
    assert GroupRingElement.from_grid(sh, f.to_grid()) == f
    assert f.to_grid().shape == (6, 6)


def test_scale_exponents_descends_and_lifts():
    cell = RingShape.cell(7, 67, 9, 2, 2)
    tame = RingShape(M=9, D1=2, D2=2, p=7, q=67, a1=0, a2=0, d1=2, d2=2)
    cnj = conjugation_relation(cell)
    assert scale_exponents(cnj, tame, 3, 3).to_triples() == [(0, 0, 8), (1, 1, 1)]
    g = GroupRingElement.from_triples(tame, [(0, 0, 3), (1, 0, -3), (0, 1, -3), (1, 1, 3)])
    assert scale_exponents(g, cell, 3, 3).to_triples() == [
        (0, 0, 3),
        (0, 3, 6),
        (3, 0, 6),
        (3, 3, 3),
    ]
    with pytest.raises(ShapeMismatch):
        scale_exponents(g, cell.with_modulus(27), 3, 3)


@given(shaped_elements(2))
def test_mul_commutes(fg):
    f, g = fg
    assert f * g == g * f


@given(shaped_elements(3))
def test_mul_associates_and_distributes(fgh):
    f, g, h = fgh
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@settings(deadline=None)  # first draw pays the jit compile
@given(shaped_elements(2))
def test_sparse_product_matches_cyclic_kernel(fg):
    f, g = fg
    grid = kernels.cyclic_mul(f.to_grid(), g.to_grid(), f.shape.M)
    assert f * g == GroupRingElement.from_grid(f.shape, grid)


@given(shaped_elements(2))
def test_evaluate_is_a_homomorphism(fg):
    f, g = fg
    M = f.shape.M
    assert (f * g).evaluate() == f.evaluate() * g.evaluate() % M
    assert (f + g).evaluate() == (f.evaluate() + g.evaluate()) % M


@given(shaped_elements(1), st.integers(0, 6))
def test_pow_matches_repeated_product(f1, n):
    (f,) = f1
    expected = GroupRingElement.constant(f.shape, 1)
    for _ in range(n):
        expected = expected * f
    assert f**n == expected


@given(shaped_elements(1), st.integers(-10, 10))
def test_scalar_operations(f1, c):
    (f,) = f1
    assert c * f == f * c
    assert f - f == GroupRingElement.zero(f.shape)
    assert (f + c) - c == f
    assert (-f) + f == GroupRingElement.zero(f.shape)


@given(shaped_elements(1))
def test_triples_roundtrip(f1):
    (f,) = f1
    assert GroupRingElement.from_triples(f.shape, f.to_triples()) == f
