"""Square matrix polynomials ``P(x) = A_0 + A_1 x + ... + A_k x^k`` with explicit grade."""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _linalg as ql

RATIONAL = "rational"
COMPLEX = "complex"
FIELDS = (RATIONAL, COMPLEX)


def coerce_matrix(a, field: str) -> np.ndarray:
    """Convert ``a`` to a read-only 2-D array over ``field``."""
    if field == RATIONAL:
        arr = ql.exact_array(a)
    elif field == COMPLEX:
        arr = np.asarray(a, dtype=complex)
    else:
        raise ValueError(f"unknown field {field!r}")
    if arr.ndim != 2:
        raise ValueError("coefficients must be 2-D matrices")
    arr.setflags(write=False)
    return arr


def field_of(a: np.ndarray) -> str:
    """Integer and object arrays are rational; floating arrays are complex."""
    return RATIONAL if np.asarray(a).dtype.kind in "Oiub" else COMPLEX


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    """Coefficients ``A_0..A_k`` of an ``n x n`` matrix polynomial of grade ``k``."""

    coeffs: tuple[np.ndarray, ...]
    field: str = RATIONAL

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a matrix polynomial needs at least one coefficient")
        mats = tuple(coerce_matrix(a, self.field) for a in self.coeffs)
        n = mats[0].shape[0]
        for a in mats:
            if a.shape != (n, n):
                raise ValueError(f"coefficient of shape {a.shape}, expected {(n, n)}")
        object.__setattr__(self, "coeffs", mats)

    @property
    def n(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def k(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> np.ndarray:
        return self.coeffs[i]

    def degree(self) -> int | None:
        """Largest index with a nonzero coefficient; ``None`` for the zero polynomial."""
        for i in range(self.k, -1, -1):
            if np.any(self.coeffs[i] != 0):
                return i
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        return (
            self.field == other.field
            and self.k == other.k
            and self.n == other.n
            and all(np.array_equal(a, b) for a, b in zip(self.coeffs, other.coeffs))
        )

    __hash__ = None

    def __neg__(self) -> MatrixPolynomial:
        return MatrixPolynomial(tuple(-a for a in self.coeffs), self.field)

    def to_complex(self) -> MatrixPolynomial:
        if self.field == COMPLEX:
            return self
        return MatrixPolynomial(
            tuple(np.array(a.tolist(), dtype=complex) for a in self.coeffs), COMPLEX
        )

    def identity(self) -> np.ndarray:
        return ql.identity(self.n) if self.field == RATIONAL else np.eye(self.n, dtype=complex)

    def zero(self) -> np.ndarray:
        return ql.zeros(self.n, self.n) if self.field == RATIONAL else np.zeros((self.n, self.n), complex)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "field": self.field,
            "coeffs": [matrix_to_json(a) for a in self.coeffs],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> MatrixPolynomial:
        field = data.get("field", RATIONAL)
        coeffs = tuple(matrix_from_json(a, field) for a in data["coeffs"])
        poly = cls(coeffs, field)
        if "k" in data and data["k"] != poly.k:
            raise ValueError(f"declared grade {data['k']} but {poly.k + 1} coefficients given")
        if "n" in data and data["n"] != poly.n:
            raise ValueError(f"declared size {data['n']} but coefficients are {poly.n}x{poly.n}")
        return poly

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def loads(cls, text: str) -> MatrixPolynomial:
        return cls.from_json_dict(json.loads(text))


def scalar_to_json(x):
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    return str(x)


def scalar_from_json(x, field: str):
    if field == COMPLEX:
        if isinstance(x, (list, tuple)):
            return complex(float(x[0]), float(x[1]))
        return complex(Fraction(x)) if isinstance(x, str) else complex(x)
    if isinstance(x, (list, tuple)):
        if float(x[1]) != 0:
            raise ValueError("complex entry in a rational matrix")
        x = x[0]
    return ql.exact_scalar(x)


def matrix_to_json(a: np.ndarray) -> list:
    return [[scalar_to_json(x) for x in row] for row in np.asarray(a).tolist()]


def matrix_from_json(rows: Sequence[Sequence], field: str) -> np.ndarray:
    data = [[scalar_from_json(x, field) for x in row] for row in rows]
    return coerce_matrix(data, field)


def from_scalars(values: Iterable, field: str = RATIONAL) -> MatrixPolynomial:
    """Scalar (``n = 1``) polynomial from its coefficient list ``a_0..a_k``."""
    return MatrixPolynomial(tuple([[v]] for v in values), field)


def evaluate(P: MatrixPolynomial, x) -> np.ndarray:
    """Horner evaluation of ``P`` at the scalar ``x``."""
    if P.field == RATIONAL:
        x = ql.exact_scalar(x)
    acc = P.coeffs[P.k]
    for i in range(P.k - 1, -1, -1):
        acc = acc * x + P.coeffs[i]
    return np.array(acc)


def reversal(P: MatrixPolynomial) -> MatrixPolynomial:
    """``x^k P(1/x)`` at the same grade: coefficient ``i`` becomes ``A_{k-i}``."""
    return MatrixPolynomial(P.coeffs[::-1], P.field)


def _require_positive_grade(P: MatrixPolynomial) -> None:
    if P.k < 1:
        raise ValueError("operation needs grade k >= 1")


def truncate_low(P: MatrixPolynomial) -> MatrixPolynomial:
    """Drop the leading coefficient: ``A_{k-1} x^{k-1} + ... + A_0``."""
    _require_positive_grade(P)
    return MatrixPolynomial(P.coeffs[:-1], P.field)


def middle_part(P: MatrixPolynomial) -> MatrixPolynomial:
    """``A_{k-1} x^{k-2} + ... + A_1`` (grade ``k-2``); needs ``k >= 2``."""
    _require_positive_grade(P)
    if P.k < 2:
        raise ValueError("middle part needs grade k >= 2")
    return MatrixPolynomial(P.coeffs[1:-1], P.field)


def horner_shift(P: MatrixPolynomial) -> MatrixPolynomial:
    """Horner shift ``A_k x^{k-1} + ... + A_1`` of grade ``k-1``."""
    _require_positive_grade(P)
    return MatrixPolynomial(P.coeffs[1:], P.field)


def coefficient_window(P: MatrixPolynomial, lo: int, hi: int) -> MatrixPolynomial:
    """Polynomial with coefficients ``A_lo..A_hi`` re-indexed from zero."""
    if not 0 <= lo <= hi <= P.k:
        raise ValueError(f"window {lo}..{hi} outside 0..{P.k}")
    return MatrixPolynomial(P.coeffs[lo:hi + 1], P.field)


def is_symmetric(P: MatrixPolynomial) -> bool:
    return all(np.array_equal(a, a.T) for a in P.coeffs)


def is_hermitian(P: MatrixPolynomial) -> bool:
    if P.field == RATIONAL:
        return is_symmetric(P)
    return all(np.array_equal(a, a.conj().T) for a in P.coeffs)


def random_polynomial(
    rng: np.random.Generator,
    n: int,
    k: int,
    low: int = -5,
    high: int = 5,
    nonsingular: Sequence[int] = (),
    symmetric: bool = False,
    max_denominator: int = 1,
) -> MatrixPolynomial:
    """Polynomial with numerators drawn uniformly from ``[low, high]``.

    Denominators are drawn from ``1..max_denominator`` (integers by default).
    Coefficients whose indices appear in ``nonsingular`` are redrawn until
    they are invertible.
    """

    def draw() -> np.ndarray:
        a = rng.integers(low, high + 1, size=(n, n)).astype(object)
        if max_denominator > 1:
            dens = rng.integers(1, max_denominator + 1, size=(n, n))
            a = np.array(
                [[ql.exact_scalar(Fraction(int(x), int(d))) for x, d in zip(ra, rd)] for ra, rd in zip(a, dens)],
                dtype=object,
            )
        if symmetric:
            a = np.triu(a) + np.triu(a, 1).T
        return a

    coeffs = []
    for i in range(k + 1):
        a = draw()
        while i in nonsingular and not ql.is_nonsingular(a):
            a = draw()
        coeffs.append(a)
    return MatrixPolynomial(tuple(coeffs))


def is_regular(P: MatrixPolynomial, rng: np.random.Generator | None = None, tries: int = 4) -> bool:
    """Certify ``det P`` is not identically zero by evaluation at random rational points."""
    rng = rng or np.random.default_rng(0)
    for _ in range(tries):
        x = Fraction(int(rng.integers(-97, 98)), int(rng.integers(1, 50)))
        if P.field == RATIONAL:
            if ql.det(evaluate(P, x)) != 0:
                return True
        else:
            val = evaluate(P, complex(x))
            if abs(np.linalg.det(val)) > 1e-10 * max(1.0, np.linalg.norm(val)) ** P.n:
                return True
    return False
