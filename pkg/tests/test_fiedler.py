import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fiedlerforms.blockpencil import (
    congruence,
    is_block_symmetric,
    pencil_from_symbols,
    sip_conjugate_elementary_identity_check,
)
from fiedlerforms.fiedler import (
    NEG_ZERO,
    GfprSpec,
    build_gfpr,
    elementary,
    gfp_by_product,
    gfp_T,
    product,
    random_spec,
    simple_fpr,
)
from fiedlerforms.matpoly import random_polynomial
from fiedlerforms.suite import distinct_coefficients

seeds = st.integers(0, 2**32 - 1)


def eye(n):
    return np.eye(n, dtype=int).astype(object)


def rand_matrix(rng, n):
    return rng.integers(-4, 5, size=(n, n)).astype(object)


def test_elementary_middle_index_layout():
    B = np.array([[7]], dtype=object)
    expected = np.array(
        [[1, 0, 0, 0], [0, 7, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=object
    )
    assert np.array_equal(elementary(2, B, 4), expected)
    expected_neg = np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 7, 0], [0, 0, 0, 1]], dtype=object
    )
    assert np.array_equal(elementary(-2, B, 4), expected_neg)


def test_elementary_end_indices():
    B = np.array([[2]], dtype=object)
    assert np.array_equal(elementary(0, B, 3), np.diag([1, 1, 2]).astype(object))
    assert np.array_equal(elementary(-3, B, 3), np.diag([2, 1, 1]).astype(object))
    assert np.array_equal(elementary(NEG_ZERO, B, 3) @ elementary(0, B, 3), eye(3))
    assert np.array_equal(elementary(3, B, 3) @ elementary(-3, B, 3), eye(3))
    with pytest.raises(ValueError):
        elementary(4, B, 3)


def test_empty_product_is_identity():
    assert np.array_equal(product((), (), 3, 2), eye(6))


@given(seeds, st.integers(2, 6), st.integers(1, 2), st.data())
def test_inverse_of_middle_elementary(seed, k, n, data):
    i = data.draw(st.integers(1, k - 1))
    B = rand_matrix(np.random.default_rng(seed), n)
    assert np.array_equal(elementary(i, B, k) @ elementary(-i, -B, k), eye(k * n))


@given(seeds, st.integers(2, 6), st.integers(1, 2), st.data())
def test_commuting_elementary_matrices(seed, k, n, data):
    i = data.draw(st.integers(-k + 1, k - 1))
    j = data.draw(st.integers(-k + 1, k - 1))
    rng = np.random.default_rng(seed)
    B1, B2 = rand_matrix(rng, n), rand_matrix(rng, n)
    lhs = elementary(i, B1, k) @ elementary(j, B2, k)
    rhs = elementary(j, B2, k) @ elementary(i, B1, k)
    if abs(abs(i) - abs(j)) != 1 and abs(i) != abs(j):
        assert np.array_equal(lhs, rhs)


@given(seeds, st.integers(2, 6), st.integers(1, 2), st.data())
def test_sip_conjugation(seed, k, n, data):
    i = data.draw(st.integers(1, k - 1))
    B = rand_matrix(np.random.default_rng(seed), n)
    assert sip_conjugate_elementary_identity_check(i, B, k, n)


ODD_GFP_K5 = [
    ["λA5+A4", "-I", "0", "0", "0"],
    ["-I", "0", "λI", "0", "0"],
    ["0", "λI", "λA3+A2", "-I", "0"],
    ["0", "0", "-I", "0", "λI"],
    ["0", "0", "0", "λI", "λA1+A0"],
]

EVEN_GFP_K4 = [
    ["-A4^-1", "λI", "0", "0"],
    ["λI", "λA3+A2", "-I", "0"],
    ["0", "-I", "0", "λI"],
    ["0", "0", "λI", "λA1+A0"],
]


@pytest.mark.parametrize("n", [1, 2])
def test_tridiagonal_gfp_odd_display(n):
    P = distinct_coefficients(np.random.default_rng(5), n, 5)
    expected = pencil_from_symbols(ODD_GFP_K5, P)
    assert gfp_T(P) == expected
    assert gfp_by_product(P) == expected


def test_tridiagonal_gfp_even_display():
    P = random_polynomial(np.random.default_rng(6), 2, 4, nonsingular=(4,), max_denominator=2)
    expected = pencil_from_symbols(EVEN_GFP_K4, P)
    assert gfp_T(P) == expected
    assert gfp_by_product(P) == expected


def test_even_gfp_needs_invertible_leading():
    P = random_polynomial(np.random.default_rng(0), 1, 4)
    P = type(P)(P.coeffs[:-1] + (np.zeros((1, 1), dtype=int),))
    with pytest.raises(ValueError):
        gfp_T(P)


SIMPLE_K5 = [
    ["λA5+A4", "A3", "-I", "0", "0"],
    ["A3", "A2-λA3", "λI", "A1", "-I"],
    ["-I", "λI", "0", "0", "0"],
    ["0", "A1", "0", "A0-λA1", "λI"],
    ["0", "-I", "0", "λI", "0"],
]
SIMPLE_K5_PERMUTED = [
    ["λA5+A4", "A3", "0", "-I", "0"],
    ["A3", "A2-λA3", "A1", "λI", "-I"],
    ["0", "A1", "A0-λA1", "0", "λI"],
    ["-I", "λI", "0", "0", "0"],
    ["0", "-I", "λI", "0", "0"],
]
SIMPLE_K6 = [
    ["λA6+A5", "A4", "-I", "0", "0", "0"],
    ["A4", "A3-λA4", "λI", "A2", "-I", "0"],
    ["-I", "λI", "0", "0", "0", "0"],
    ["0", "A2", "0", "A1-λA2", "λI", "A0"],
    ["0", "-I", "0", "λI", "0", "0"],
    ["0", "0", "0", "A0", "0", "-λA0"],
]
SIMPLE_K6_PERMUTED = [
    ["λA6+A5", "A4", "0", "0", "-I", "0"],
    ["A4", "A3-λA4", "A2", "0", "λI", "-I"],
    ["0", "A2", "A1-λA2", "A0", "0", "λI"],
    ["0", "0", "A0", "-λA0", "0", "0"],
    ["-I", "λI", "0", "0", "0", "0"],
    ["0", "-I", "λI", "0", "0", "0"],
]


@pytest.mark.parametrize(
    "k, grid, c, permuted",
    [
        (5, SIMPLE_K5, (1, 2, 4, 3, 5), SIMPLE_K5_PERMUTED),
        (6, SIMPLE_K6, (1, 2, 4, 6, 3, 5), SIMPLE_K6_PERMUTED),
    ],
)
@pytest.mark.parametrize("n", [1, 2])
def test_simple_fpr_displays(k, grid, c, permuted, n):
    P = distinct_coefficients(np.random.default_rng(k + n), n, k)
    L = pencil_from_symbols(grid, P)
    assert simple_fpr(P) == L
    assert build_gfpr(P, GfprSpec(k - 1)) == L
    assert congruence(L, c) == pencil_from_symbols(permuted, P)


def test_spec_validation():
    with pytest.raises(ValueError):
        GfprSpec(5).validate(5)
    with pytest.raises(ValueError):
        GfprSpec(3, (0, 0), (), (eye(1), eye(1)), ()).validate(5, 1)
    with pytest.raises(ValueError):
        GfprSpec(3, (1,), (), (), ()).validate(5, 1)


def test_shifted_tv_round_trip():
    spec = GfprSpec.with_shifted_tv(6, 1, (), (0,), (), (eye(1),))
    assert spec.t_v == (-6,)
    assert spec.shifted_tv(6) == (0,)


@given(seeds, st.integers(2, 7), st.integers(1, 2), st.data())
def test_random_gfpr_is_block_symmetric(seed, k, n, data):
    h = data.draw(st.integers(0, k - 1))
    rng = np.random.default_rng(seed)
    P = random_polynomial(rng, n, k, symmetric=data.draw(st.booleans()))
    spec = random_spec(rng, k, h, n)
    L = build_gfpr(P, spec)
    assert is_block_symmetric(L)
    assert spec.is_nonsingular_assignment(k)


@given(seeds, st.integers(2, 7), st.data())
def test_symmetric_data_gives_symmetric_gfpr(seed, k, data):
    h = data.draw(st.integers(0, k - 1))
    rng = np.random.default_rng(seed)
    P = random_polynomial(rng, 2, k, symmetric=True)
    L = build_gfpr(P, random_spec(rng, k, h, 2, symmetric=True))
    assert np.array_equal(L.lam, L.lam.T) and np.array_equal(L.const, L.const.T)
