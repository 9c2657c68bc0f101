"""Block pencils ``x X + Y`` on a grid of ``n x n`` blocks, with one-based block indexing."""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from . import _linalg as ql
from .matpoly import (
    COMPLEX,
    RATIONAL,
    MatrixPolynomial,
    coerce_matrix,
    field_of,
    matrix_from_json,
    matrix_to_json,
)


def _zeros(rows: int, cols: int, field: str) -> np.ndarray:
    return ql.zeros(rows, cols) if field == RATIONAL else np.zeros((rows, cols), complex)


def _eye(n: int, field: str) -> np.ndarray:
    return ql.identity(n) if field == RATIONAL else np.eye(n, dtype=complex)


@dataclass(frozen=True, eq=False)
class BlockPencil:
    """The pencil ``x*lam + const`` seen as a ``rows x cols`` grid of ``n x n`` blocks."""

    n: int
    lam: np.ndarray
    const: np.ndarray

    def __post_init__(self):
        field = field_of(self.lam) if field_of(self.const) == field_of(self.lam) else COMPLEX
        lam = coerce_matrix(self.lam, field)
        const = coerce_matrix(self.const, field)
        if lam.shape != const.shape:
            raise ValueError("lambda and constant parts differ in shape")
        if self.n <= 0 or lam.shape[0] % self.n or lam.shape[1] % self.n:
            raise ValueError(f"shape {lam.shape} is not a grid of {self.n}x{self.n} blocks")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "const", const)

    __array_ufunc__ = None  # let ``ndarray @ pencil`` reach __rmatmul__

    @property
    def rows(self) -> int:
        return self.lam.shape[0] // self.n

    @property
    def cols(self) -> int:
        return self.lam.shape[1] // self.n

    @property
    def field(self) -> str:
        return field_of(self.lam)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def _span(self, i: int) -> slice:
        return slice((i - 1) * self.n, i * self.n)

    def block(self, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
        """The pair ``(X_ij, Y_ij)`` of block ``(i, j)``, one-based."""
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise IndexError(f"block ({i}, {j}) outside {self.rows}x{self.cols} grid")
        r, c = self._span(i), self._span(j)
        return self.lam[r, c], self.const[r, c]

    def sub(self, rows: Sequence[int], cols: Sequence[int]) -> BlockPencil:
        """Sub-pencil formed by the listed block rows and columns (one-based, in order)."""
        ri = _block_indices(rows, self.n)
        ci = _block_indices(cols, self.n)
        return BlockPencil(self.n, self.lam[np.ix_(ri, ci)], self.const[np.ix_(ri, ci)])

    def is_zero(self) -> bool:
        return not (np.any(self.lam != 0) or np.any(self.const != 0))

    def is_constant(self) -> bool:
        return not np.any(self.lam != 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BlockPencil):
            return NotImplemented
        return (
            self.n == other.n
            and self.lam.shape == other.lam.shape
            and np.array_equal(self.lam, other.lam)
            and np.array_equal(self.const, other.const)
        )

    __hash__ = None

    def __add__(self, other: BlockPencil) -> BlockPencil:
        return BlockPencil(self.n, self.lam + other.lam, self.const + other.const)

    def __sub__(self, other: BlockPencil) -> BlockPencil:
        return BlockPencil(self.n, self.lam - other.lam, self.const - other.const)

    def __neg__(self) -> BlockPencil:
        return BlockPencil(self.n, -self.lam, -self.const)

    def __matmul__(self, other: np.ndarray) -> BlockPencil:
        if isinstance(other, BlockPencil):
            raise TypeError("product of two pencils is not a pencil")
        return BlockPencil(self.n, self.lam @ other, self.const @ other)

    def __rmatmul__(self, other: np.ndarray) -> BlockPencil:
        return BlockPencil(self.n, other @ self.lam, other @ self.const)

    def transpose(self) -> BlockPencil:
        """Full (entrywise) transpose."""
        return BlockPencil(self.n, self.lam.T, self.const.T)

    def conj_transpose(self) -> BlockPencil:
        if self.field == RATIONAL:
            return self.transpose()
        return BlockPencil(self.n, self.lam.conj().T, self.const.conj().T)

    def to_complex(self) -> BlockPencil:
        if self.field == COMPLEX:
            return self
        return BlockPencil(
            self.n,
            np.array(self.lam.tolist(), dtype=complex),
            np.array(self.const.tolist(), dtype=complex),
        )

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "rows": self.rows,
            "cols": self.cols,
            "field": self.field,
            "lambda": matrix_to_json(self.lam),
            "const": matrix_to_json(self.const),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> BlockPencil:
        field = data.get("field", RATIONAL)
        pencil = cls(
            int(data["n"]),
            matrix_from_json(data["lambda"], field),
            matrix_from_json(data["const"], field),
        )
        if (data.get("rows", pencil.rows), data.get("cols", pencil.cols)) != pencil.shape:
            raise ValueError("declared block counts do not match the matrices")
        return pencil

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict())


def _block_indices(blocks: Iterable[int], n: int) -> np.ndarray:
    idx = [r for b in blocks for r in range((b - 1) * n, b * n)]
    return np.array(idx, dtype=int)


def zero_pencil(n: int, rows: int, cols: int, field: str = RATIONAL) -> BlockPencil:
    z = _zeros(rows * n, cols * n, field)
    return BlockPencil(n, z, z)


def constant_pencil(M: np.ndarray, n: int) -> BlockPencil:
    M = np.asarray(M)
    return BlockPencil(n, np.zeros_like(M), M)


def from_block_grid(grid: Sequence[Sequence], n: int, field: str = RATIONAL) -> BlockPencil:
    """Assemble a pencil from ``grid[i][j] = (X, Y)``; ``None`` or ``0`` marks a zero block."""
    rows, cols = len(grid), len(grid[0])
    lam = _zeros(rows * n, cols * n, field)
    const = _zeros(rows * n, cols * n, field)
    for i, row in enumerate(grid):
        if len(row) != cols:
            raise ValueError("ragged block grid")
        for j, entry in enumerate(row):
            if entry is None or (isinstance(entry, int) and entry == 0):
                continue
            x, y = entry
            lam[i * n:(i + 1) * n, j * n:(j + 1) * n] = x
            const[i * n:(i + 1) * n, j * n:(j + 1) * n] = y
    return BlockPencil(n, lam, const)


def hstack(pencils: Sequence[BlockPencil]) -> BlockPencil:
    return BlockPencil(
        pencils[0].n,
        np.concatenate([p.lam for p in pencils], axis=1),
        np.concatenate([p.const for p in pencils], axis=1),
    )


def vstack(pencils: Sequence[BlockPencil]) -> BlockPencil:
    return BlockPencil(
        pencils[0].n,
        np.concatenate([p.lam for p in pencils], axis=0),
        np.concatenate([p.const for p in pencils], axis=0),
    )


def block_matrix(rows: Sequence[Sequence[BlockPencil]]) -> BlockPencil:
    return vstack([hstack(list(r)) for r in rows])


def block_transpose_matrix(M: np.ndarray, n: int) -> np.ndarray:
    """Swap block ``(i, j)`` with ``(j, i)`` without transposing the blocks."""
    r, c = M.shape[0] // n, M.shape[1] // n
    blocks = M.reshape(r, n, c, n)
    return np.ascontiguousarray(blocks.transpose(2, 1, 0, 3)).reshape(c * n, r * n)


def block_transpose(M: BlockPencil) -> BlockPencil:
    return BlockPencil(M.n, block_transpose_matrix(M.lam, M.n), block_transpose_matrix(M.const, M.n))


def is_block_symmetric(M: BlockPencil) -> bool:
    return M.rows == M.cols and block_transpose(M) == M


def is_symmetric(M: BlockPencil) -> bool:
    return M.rows == M.cols and M.transpose() == M


def is_hermitian(M: BlockPencil) -> bool:
    return M.rows == M.cols and M.conj_transpose() == M


@dataclass(frozen=True)
class BlockPermutation:
    """A permutation ``c`` of ``1..k``; its matrix has identity block ``(c_i, i)``."""

    c: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.c)
        if sorted(c) != list(range(1, len(c) + 1)):
            raise ValueError(f"{c} is not a permutation of 1..{len(c)}")
        object.__setattr__(self, "c", c)

    def __len__(self) -> int:
        return len(self.c)

    def __iter__(self):
        return iter(self.c)

    def __getitem__(self, i: int) -> int:
        """One-based access ``c_i``."""
        return self.c[i - 1]

    def compose(self, other: BlockPermutation) -> BlockPermutation:
        """``self o other``: the permutation whose matrix is ``matrix(self) @ matrix(other)``."""
        return BlockPermutation(tuple(self[j] for j in other.c))

    def inverse(self) -> BlockPermutation:
        inv = [0] * len(self)
        for i, ci in enumerate(self.c, start=1):
            inv[ci - 1] = i
        return BlockPermutation(tuple(inv))

    def swap_values(self, a: int, b: int) -> BlockPermutation:
        """Compose on the left with the transposition of ``a`` and ``b``."""
        swap = {a: b, b: a}
        return BlockPermutation(tuple(swap.get(x, x) for x in self.c))

    @classmethod
    def identity(cls, k: int) -> BlockPermutation:
        return cls(tuple(range(1, k + 1)))


def as_permutation(c) -> BlockPermutation:
    return c if isinstance(c, BlockPermutation) else BlockPermutation(tuple(c))


def perm_matrix(c, n: int, field: str = RATIONAL) -> np.ndarray:
    """Constant block matrix with ``I_n`` in block ``(c_i, i)``."""
    c = as_permutation(c)
    k = len(c)
    M = _zeros(k * n, k * n, field)
    eye = _eye(n, field)
    for i, ci in enumerate(c.c, start=1):
        M[(ci - 1) * n:ci * n, (i - 1) * n:i * n] = eye
    return M


def sip_matrix(k: int, n: int, field: str = RATIONAL) -> np.ndarray:
    """Block anti-identity ``R_k``."""
    return perm_matrix(range(k, 0, -1), n, field)


def congruence(L: BlockPencil, c) -> BlockPencil:
    """``perm_matrix(c)^B @ L @ perm_matrix(c)``; block ``(i, j)`` of the result is ``L(c_i, c_j)``."""
    c = as_permutation(c)
    if L.rows != L.cols or len(c) != L.rows:
        raise ValueError(f"permutation of length {len(c)} for a {L.rows}x{L.cols} pencil")
    return L.sub(c.c, c.c)


def congruence_by_product(L: BlockPencil, c) -> BlockPencil:
    """Same as :func:`congruence`, computed literally as a matrix product."""
    Pi = perm_matrix(c, L.n, L.field)
    return block_transpose_matrix(Pi, L.n) @ L @ Pi


def sip_conjugate_elementary_identity_check(i: int, B: np.ndarray, k: int, n: int) -> bool:
    """Check ``R_k M_{-i}(B) R_k = M_{k-i}(B)`` exactly."""
    from .fiedler import elementary

    if not 1 <= i <= k:
        raise ValueError(f"index {i} outside 1..{k}")
    B = np.asarray(B)
    field = field_of(B)
    R = sip_matrix(k, n, field)
    lhs = R @ elementary(-i, B, k) @ R
    rhs = elementary(k - i, B, k)
    return bool(np.array_equal(lhs, rhs))


# --- symbolic rendering -------------------------------------------------------

_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*([λlx]?)\s*(I|A(\d+)(\^-1)?|0)\s*")


def parse_block_expr(expr: str, P: MatrixPolynomial) -> tuple[np.ndarray, np.ndarray]:
    """Parse a block like ``"-λA5+A4"``, ``"λI"``, ``"-I"``, ``"-A6^-1"`` or ``"0"``.

    ``λ`` may also be written ``l`` or ``x``.
    """
    n, field = P.n, P.field
    X, Y = _zeros(n, n, field), _zeros(n, n, field)
    pos = 0
    text = expr.strip()
    if not text:
        raise ValueError("empty block expression")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse block expression {expr!r}")
        sign, mult, lam, atom, idx, inv = m.groups()
        coef = (-1 if sign == "-" else 1) * (int(mult) if mult else 1)
        if atom == "0":
            value = _zeros(n, n, field)
        elif atom == "I":
            value = _eye(n, field)
        else:
            value = P.coeffs[int(idx)]
            if inv:
                value = ql.inverse(value) if field == RATIONAL else np.linalg.inv(value)
        if lam:
            X = X + coef * value
        else:
            Y = Y + coef * value
        pos = m.end()
    return X, Y


def pencil_from_symbols(grid: Sequence[Sequence[str]], P: MatrixPolynomial) -> BlockPencil:
    """Build a pencil from a grid of symbolic block expressions over ``P``."""
    return from_block_grid([[parse_block_expr(e, P) for e in row] for row in grid], P.n, P.field)


def _name_matrix(M: np.ndarray, P: MatrixPolynomial | None) -> str | None:
    """Short name for ``M``: ``""`` for zero, ``"I"``, ``"-A3"``, ... or ``None``."""
    if not np.any(M != 0):
        return ""
    n = M.shape[0]
    eye = _eye(n, field_of(M))
    for sign, s in ((1, ""), (-1, "-")):
        if np.array_equal(M, sign * eye):
            return s + "I"
    if P is not None:
        for i, a in enumerate(P.coeffs):
            if not np.any(a != 0):
                continue
            for sign, s in ((1, ""), (-1, "-")):
                if np.array_equal(M, sign * a):
                    return f"{s}A{i}"
    return None


def render_block(X: np.ndarray, Y: np.ndarray, P: MatrixPolynomial | None = None) -> str:
    nx, ny = _name_matrix(X, P), _name_matrix(Y, P)
    if nx is None or ny is None:
        return "*"
    parts = []
    if nx:
        parts.append(("-λ" + nx[1:]) if nx.startswith("-") else "λ" + nx)
    if ny:
        parts.append(ny if not parts or ny.startswith("-") else "+" + ny)
    return "".join(parts) or "0"


def render_symbolic(L: BlockPencil, P: MatrixPolynomial | None = None) -> list[list[str]]:
    """Grid of block names; ``*`` marks blocks without a short symbolic name."""
    return [
        [render_block(*L.block(i, j), P) for j in range(1, L.cols + 1)]
        for i in range(1, L.rows + 1)
    ]


def format_symbolic(L: BlockPencil, P: MatrixPolynomial | None = None) -> str:
    grid = render_symbolic(L, P)
    width = max(len(e) for row in grid for e in row)
    return "\n".join("[ " + "  ".join(e.rjust(width) for e in row) + " ]" for row in grid)
