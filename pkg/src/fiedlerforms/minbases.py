"""Polynomial matrices, the ``K_s``/``Lambda_s`` pair, minimal-basis tests and polynomial recovery."""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from . import _linalg as ql
from .blockpencil import BlockPencil, _eye, _zeros
from .matpoly import RATIONAL, MatrixPolynomial, coerce_matrix, field_of


@dataclass(frozen=True, eq=False)
class PolynomialMatrix:
    """Rectangular matrix polynomial ``sum_d coeffs[d] x^d``."""

    coeffs: tuple[np.ndarray, ...]

    __array_ufunc__ = None  # let ``ndarray @ polymatrix`` reach __rmatmul__

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("need at least one coefficient")
        fld = RATIONAL if all(field_of(c) == RATIONAL for c in self.coeffs) else "complex"
        mats = tuple(coerce_matrix(c, fld) for c in self.coeffs)
        if len({m.shape for m in mats}) != 1:
            raise ValueError("coefficients differ in shape")
        object.__setattr__(self, "coeffs", mats)

    @classmethod
    def from_pencil(cls, L: BlockPencil) -> PolynomialMatrix:
        return cls((L.const, L.lam))

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs[0].shape

    @property
    def field(self) -> str:
        return field_of(self.coeffs[0])

    def degree(self) -> int:
        """Highest power with a nonzero coefficient (``-1`` for the zero matrix)."""
        for d in range(len(self.coeffs) - 1, -1, -1):
            if np.any(self.coeffs[d] != 0):
                return d
        return -1

    def row_degrees(self) -> list[int]:
        out = []
        for i in range(self.shape[0]):
            deg = -1
            for d, c in enumerate(self.coeffs):
                if np.any(c[i] != 0):
                    deg = d
            out.append(deg)
        return out

    def highest_row_degree_matrix(self) -> np.ndarray:
        """Row ``i`` holds the coefficient of ``x^{d_i}`` in row ``i``, ``d_i`` its degree."""
        degs = self.row_degrees()
        out = _zeros(*self.shape, self.field)
        for i, d in enumerate(degs):
            if d >= 0:
                out[i] = self.coeffs[d][i]
        return out

    def evaluate(self, x) -> np.ndarray:
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return np.array(acc)

    def transpose(self) -> PolynomialMatrix:
        return PolynomialMatrix(tuple(c.T for c in self.coeffs))

    def __matmul__(self, other):
        if isinstance(other, BlockPencil):
            other = PolynomialMatrix.from_pencil(other)
        if isinstance(other, np.ndarray):
            other = PolynomialMatrix((other,))
        rows, cols = self.shape[0], other.shape[1]
        fld = RATIONAL if self.field == other.field == RATIONAL else "complex"
        out = [_zeros(rows, cols, fld) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a @ b
        return PolynomialMatrix(tuple(out))

    def __rmatmul__(self, other):
        if isinstance(other, BlockPencil):
            return PolynomialMatrix.from_pencil(other) @ self
        return PolynomialMatrix((np.asarray(other),)) @ self

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolynomialMatrix) or self.shape != other.shape:
            return NotImplemented if not isinstance(other, PolynomialMatrix) else False
        d = max(len(self.coeffs), len(other.coeffs))
        z = _zeros(*self.shape, self.field)
        a = list(self.coeffs) + [z] * (d - len(self.coeffs))
        b = list(other.coeffs) + [z] * (d - len(other.coeffs))
        return all(np.array_equal(x, y) for x, y in zip(a, b))

    __hash__ = None


def make_K(s: int, n: int, fld: str = RATIONAL) -> BlockPencil:
    """``K_s = L_s (x) I_n``: block row ``i`` is ``-I`` in column ``i`` and ``x I`` in column ``i+1``."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    lam = _zeros(s * n, (s + 1) * n, fld)
    const = _zeros(s * n, (s + 1) * n, fld)
    eye = _eye(n, fld)
    for i in range(s):
        const[i * n:(i + 1) * n, i * n:(i + 1) * n] = -eye
        lam[i * n:(i + 1) * n, (i + 1) * n:(i + 2) * n] = eye
    return BlockPencil(n, lam, const)


def make_Lambda(s: int, n: int, fld: str = RATIONAL) -> PolynomialMatrix:
    """``Lambda_s (x) I_n`` with ``Lambda_s = [x^s, ..., x, 1]``."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    coeffs = []
    for d in range(s + 1):
        c = _zeros(n, (s + 1) * n, fld)
        col = s - d
        c[:, col * n:(col + 1) * n] = _eye(n, fld)
        coeffs.append(c)
    return PolynomialMatrix(tuple(coeffs))


def _as_polynomial_matrix(G) -> PolynomialMatrix:
    if isinstance(G, BlockPencil):
        return PolynomialMatrix.from_pencil(G)
    if isinstance(G, PolynomialMatrix):
        return G
    return PolynomialMatrix(tuple(np.asarray(c) for c in G))


_X = sympy.Symbol("x")


def _minor_polynomial(G: PolynomialMatrix, cols: Sequence[int], bound: int) -> sympy.Poly:
    """Exact determinant of the column-subset minor, by evaluation and interpolation."""
    points = []
    for x in range(bound + 1):
        val = G.evaluate(x)[:, list(cols)]
        points.append((x, sympy.Rational(Fraction(ql.det(val)))))
    return sympy.Poly(sympy.interpolate(points, _X), _X, domain="QQ")


def full_rank_everywhere(G) -> bool:
    """True iff ``G(x0)`` has full row rank for every complex ``x0``.

    Decided exactly: the gcd of all maximal minors must be a nonzero constant.
    """
    G = _as_polynomial_matrix(G)
    if G.field != RATIONAL:
        raise ValueError("exact rank certificate needs rational data")
    m, N = G.shape
    if m == 0:
        return True
    if m > N:
        return False
    bound = sum(max(d, 0) for d in G.row_degrees())
    g = None
    for cols in itertools.combinations(range(N), m):
        minor = _minor_polynomial(G, cols, bound)
        if minor.is_zero:
            continue
        g = minor if g is None else sympy.gcd(g, minor)
        if g.degree() == 0:
            return True
    return False


def is_minimal_basis(G) -> bool:
    """Full row rank everywhere and a full-row-rank highest-row-degree coefficient matrix."""
    G = _as_polynomial_matrix(G)
    m = G.shape[0]
    if m == 0:
        return True
    if any(d < 0 for d in G.row_degrees()):
        return False
    if ql.rank(G.highest_row_degree_matrix()) != m:
        return False
    return full_rank_everywhere(G)


def are_dual_minimal_bases(G, N) -> bool:
    G, N = _as_polynomial_matrix(G), _as_polynomial_matrix(N)
    if G.shape[0] + N.shape[0] != G.shape[1] or G.shape[1] != N.shape[1]:
        return False
    prod = G @ N.transpose()
    if any(np.any(c != 0) for c in prod.coeffs):
        return False
    return is_minimal_basis(G) and is_minimal_basis(N)


def scaled_basis_check(B: np.ndarray, G) -> bool | None:
    """For nonsingular ``B`` confirm ``B G`` is again a minimal basis; ``None`` if ``B`` is singular."""
    B = ql.exact_array(B)
    if not ql.is_nonsingular(B):
        return None
    G = _as_polynomial_matrix(G)
    return is_minimal_basis(B @ G)


def minimal_bases_parts(
    C: BlockPencil, body_rows: Sequence[int], body_cols: Sequence[int]
) -> tuple[BlockPencil, BlockPencil, BlockPencil]:
    """Split ``C`` as ``[M, G2^T; G1, 0]`` and return ``(M, G1, G2)``.

    Raises ``ValueError`` if the block opposite ``M`` is not zero.
    """
    wing_rows = [i for i in range(1, C.rows + 1) if i not in body_rows]
    wing_cols = [j for j in range(1, C.cols + 1) if j not in body_cols]
    if wing_rows and wing_cols and not C.sub(wing_rows, wing_cols).is_zero():
        raise ValueError("the corner opposite the body is not zero")
    M = C.sub(body_rows, body_cols)
    G1 = C.sub(wing_rows, body_cols)
    G2 = C.sub(body_rows, wing_cols).transpose()
    return M, G1, G2


def recover_Q(
    C: BlockPencil,
    body_rows: Sequence[int],
    body_cols: Sequence[int],
    N1: PolynomialMatrix | None = None,
    N2: PolynomialMatrix | None = None,
) -> MatrixPolynomial:
    """``N2 M N1^T`` for the body ``M``; ``N1``, ``N2`` default to ``Lambda_p``, ``Lambda_q``."""
    M, _, _ = minimal_bases_parts(C, body_rows, body_cols)
    n, fld = C.n, C.field
    p, q = len(body_cols) - 1, len(body_rows) - 1
    N1 = N1 if N1 is not None else make_Lambda(p, n, fld)
    N2 = N2 if N2 is not None else make_Lambda(q, n, fld)
    Q = N2 @ M @ N1.transpose()
    grade = 1 + N1.degree() + N2.degree()
    coeffs = list(Q.coeffs[:grade + 1])
    coeffs += [_zeros(n, n, fld)] * (grade + 1 - len(coeffs))
    if any(np.any(c != 0) for c in Q.coeffs[grade + 1:]):
        raise ValueError("product exceeds the declared grade")
    return MatrixPolynomial(tuple(coeffs), fld)
