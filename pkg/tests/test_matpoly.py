from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from fiedlerforms.matpoly import (
    COMPLEX,
    MatrixPolynomial,
    coefficient_window,
    evaluate,
    from_scalars,
    horner_shift,
    is_regular,
    is_symmetric,
    middle_part,
    random_polynomial,
    reversal,
    truncate_low,
)

seeds = st.integers(0, 2**32 - 1)


def test_grade_and_size():
    P = from_scalars([1, 2, 3])
    assert (P.n, P.k) == (1, 2)
    assert P.degree() == 2


def test_degree_of_zero_leading_coefficient():
    assert from_scalars([1, 2, 0]).degree() == 1
    assert from_scalars([0, 0]).degree() is None


def test_rejects_mismatched_shapes():
    with pytest.raises(ValueError):
        MatrixPolynomial((np.eye(2, dtype=int), np.eye(3, dtype=int)))
    with pytest.raises(ValueError):
        MatrixPolynomial(())


def test_evaluate_is_exact():
    P = from_scalars([1, -3, 2])
    assert evaluate(P, Fraction(1, 2))[0, 0] == 0
    assert evaluate(P, 1)[0, 0] == 0
    assert evaluate(P, 3)[0, 0] == 10


def test_windows():
    P = from_scalars([0, 1, 2, 3, 4])
    assert truncate_low(P) == from_scalars([0, 1, 2, 3])
    assert horner_shift(P) == from_scalars([1, 2, 3, 4])
    assert middle_part(P) == from_scalars([1, 2, 3])
    assert coefficient_window(P, 2, 3) == from_scalars([2, 3])
    with pytest.raises(ValueError):
        coefficient_window(P, 3, 5)
    with pytest.raises(ValueError):
        middle_part(from_scalars([1, 2]))


def test_regularity():
    assert is_regular(from_scalars([1, 0, 1]))
    singular = MatrixPolynomial((np.array([[1, 0], [0, 0]]), np.array([[0, 0], [0, 0]])))
    assert not is_regular(singular)


def test_json_round_trip_rational():
    P = random_polynomial(np.random.default_rng(3), 2, 3, max_denominator=4)
    assert MatrixPolynomial.loads(P.dumps()) == P


def test_json_round_trip_complex():
    P = MatrixPolynomial((np.array([[1 + 2j]]), np.array([[0.5 - 1j]])), COMPLEX)
    assert MatrixPolynomial.loads(P.dumps()) == P


def test_json_rejects_wrong_declared_grade():
    data = from_scalars([1, 2]).to_json_dict()
    data["k"] = 3
    with pytest.raises(ValueError):
        MatrixPolynomial.from_json_dict(data)


def test_random_polynomial_honours_requests():
    P = random_polynomial(np.random.default_rng(1), 3, 4, nonsingular=(0, 4), symmetric=True)
    assert is_symmetric(P)
    for i in (0, 4):
        assert sympy.Matrix(P.coeffs[i].tolist()).det() != 0


@given(seeds, st.integers(1, 3), st.integers(1, 5))
def test_reversal_property(seed, n, k):
    rng = np.random.default_rng(seed)
    P = random_polynomial(rng, n, k)
    x = Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 9)))
    assert np.array_equal(evaluate(reversal(P), x), evaluate(P, 1 / x) * x**k)
    assert reversal(reversal(P)) == P


@given(seeds, st.integers(1, 3), st.integers(1, 5))
def test_evaluate_matches_sympy(seed, n, k):
    rng = np.random.default_rng(seed)
    P = random_polynomial(rng, n, k, max_denominator=3)
    x = sympy.Symbol("x")
    expr = sum((sympy.Matrix(a.tolist()) * x**i for i, a in enumerate(P.coeffs)), sympy.zeros(n, n))
    point = Fraction(int(rng.integers(-9, 9)), int(rng.integers(1, 9)))
    expected = expr.subs(x, sympy.Rational(point.numerator, point.denominator))
    got = evaluate(P, point)
    assert [[sympy.Rational(str(v)) for v in row] for row in got.tolist()] == expected.tolist()
