import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from oracles import sympy_coefficients, sympy_lambda_row, sympy_pencil

from fiedlerforms.blockpencil import BlockPencil
from fiedlerforms.families import natural_partition, permute_columns, skeleton
from fiedlerforms.matpoly import random_polynomial
from fiedlerforms.minbases import (
    PolynomialMatrix,
    are_dual_minimal_bases,
    full_rank_everywhere,
    is_minimal_basis,
    make_K,
    make_Lambda,
    minimal_bases_parts,
    recover_Q,
    scaled_basis_check,
)
from fiedlerforms.suite import body_satisfying_as

seeds = st.integers(0, 2**32 - 1)


def poly_matrix(*coeffs):
    return PolynomialMatrix(tuple(np.array(c, dtype=object) for c in coeffs))


# [[1, x^2, 1-x], [0, 1, x]], lowest degree first
BASIS = poly_matrix([[1, 0, 1], [0, 1, 0]], [[0, 0, -1], [0, 0, 1]], [[0, 1, 0], [0, 0, 0]])
# [x^3 + x - 1, -x, 1]
DUAL = poly_matrix([[-1, 0, 1]], [[1, -1, 0]], [[0, 0, 0]], [[1, 0, 0]])


def test_worked_minimal_basis():
    assert is_minimal_basis(BASIS)
    assert np.array_equal(BASIS.highest_row_degree_matrix(), np.array([[0, 1, 0], [0, 0, 1]], dtype=object))


def test_worked_dual_pair():
    assert are_dual_minimal_bases(BASIS, DUAL)
    assert are_dual_minimal_bases(DUAL, BASIS)


def test_not_minimal_when_rank_drops():
    # [x, x] vanishes at 0
    assert not full_rank_everywhere(poly_matrix([[0, 0]], [[1, 1]]))
    # rows sharing the highest-degree pattern
    assert not is_minimal_basis(poly_matrix([[1, 0], [0, 1]], [[1, 1], [1, 1]]))


def test_scaled_basis():
    assert scaled_basis_check(np.array([[1, 2], [0, 1]]), BASIS)
    assert scaled_basis_check(np.array([[1, 2], [2, 4]]), BASIS) is None


@pytest.mark.parametrize("s", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2])
def test_k_and_lambda_are_dual(s, n):
    K, Lam = make_K(s, n), make_Lambda(s, n)
    assert are_dual_minimal_bases(K, Lam)
    expected = sympy_lambda_row(s, n)
    assert all(np.array_equal(a, b) for a, b in zip(sympy_coefficients(expected, s), Lam.coeffs))


def test_k_layout():
    K = make_K(2, 1)
    assert np.array_equal(K.const, np.array([[-1, 0, 0], [0, -1, 0]], dtype=object))
    assert np.array_equal(K.lam, np.array([[0, 1, 0], [0, 0, 1]], dtype=object))


def test_parts_reject_nonzero_corner():
    P = random_polynomial(np.random.default_rng(0), 1, 3)
    S = skeleton(P, "O1")
    with pytest.raises(ValueError):
        minimal_bases_parts(S, [1], [1])


@pytest.mark.parametrize("tag, k", [("O1", 5), ("O2", 5), ("E1", 6), ("E2", 6), ("O1", 1)])
@pytest.mark.parametrize("n", [1, 2])
def test_skeleton_recovers_polynomial(tag, k, n):
    P = random_polynomial(np.random.default_rng(k + n), n, k)
    cols, rows, body_cols = natural_partition(tag, k)
    C = permute_columns(skeleton(P, tag), cols)
    assert recover_Q(C, rows, body_cols) == P


@given(seeds, st.integers(0, 3), st.integers(0, 3), st.integers(1, 2))
def test_recover_matches_sympy(seed, p, q, n):
    rng = np.random.default_rng(seed)
    P = random_polynomial(rng, n, p + q + 1)
    M = body_satisfying_as(rng, p, q, n, P)
    K1, K2 = make_K(p, n), make_K(q, n)
    size = (p + q + 1) * n
    lam = np.zeros((size, size), dtype=object)
    const = np.zeros((size, size), dtype=object)
    top, left = (q + 1) * n, (p + 1) * n
    for out, body, wing_lo, wing_hi in ((lam, M.lam, K1.lam, K2.lam), (const, M.const, K1.const, K2.const)):
        out[:top, :left] = body
        out[top:, :left] = wing_lo
        out[:top, left:] = wing_hi.T
    C = BlockPencil(n, lam, const)
    got = recover_Q(C, range(1, q + 2), range(1, p + 2))
    expected = sympy_lambda_row(q, n) * sympy_pencil(M.lam, M.const) * sympy_lambda_row(p, n).T
    coeffs = sympy_coefficients(sympy.expand(expected), p + q + 1)
    assert all(np.array_equal(a, b) for a, b in zip(got.coeffs, coeffs))
    assert got == P
