"""Elementary block matrices, their products, and the block-symmetric Fiedler-type pencils."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import _linalg as ql
from .blockpencil import BlockPencil, from_block_grid
from .matpoly import RATIONAL, MatrixPolynomial, coerce_matrix, field_of
from .tuples import (
    admissible_tuple,
    rev,
    satisfies_sip,
    shift,
    symmetric_complement,
)

NEG_ZERO = "-0"
"""Index of ``M_{-0}(B) = M_0(B)^{-1}``; Python integers have no negative zero."""


def _inv(B: np.ndarray) -> np.ndarray:
    if field_of(B) == RATIONAL:
        return ql.inverse(B)
    if abs(np.linalg.det(B)) == 0:
        raise ValueError("matrix is singular")
    return np.linalg.inv(B)


def _eye(m: int, fld: str) -> np.ndarray:
    return ql.identity(m) if fld == RATIONAL else np.eye(m, dtype=complex)


def elementary(i, B: np.ndarray, k: int) -> np.ndarray:
    """The ``k x k`` block elementary matrix ``M_i(B)``.

    ``i`` ranges over ``-k..k`` plus :data:`NEG_ZERO`.  ``M_{-0}`` and ``M_k``
    are the inverses of ``M_0`` and ``M_{-k}`` and need ``B`` nonsingular.
    """
    B = np.asarray(B)
    fld = field_of(B)
    B = coerce_matrix(B, fld)
    n = B.shape[0]
    M = _eye(k * n, fld)

    def put(r: int, c: int, block: np.ndarray) -> None:
        M[(r - 1) * n:r * n, (c - 1) * n:c * n] = block

    eye, zero = _eye(n, fld), _eye(n, fld) * 0
    if i == NEG_ZERO:
        put(k, k, _inv(B))
    elif not isinstance(i, (int, np.integer)) or not -k <= i <= k:
        raise ValueError(f"elementary index {i!r} outside -{k}..{k}")
    elif i == 0:
        put(k, k, B)
    elif i == -k:
        put(1, 1, B)
    elif i == k:
        put(1, 1, _inv(B))
    else:
        r = k - abs(i)
        if i > 0:
            put(r, r, B), put(r, r + 1, eye), put(r + 1, r, eye), put(r + 1, r + 1, zero)
        else:
            put(r, r, zero), put(r, r + 1, eye), put(r + 1, r, eye), put(r + 1, r + 1, B)
    return M


def product(t: Sequence, Z: Sequence[np.ndarray], k: int, n: int, fld: str = RATIONAL) -> np.ndarray:
    """``M_t(Z) = M_{t_1}(Z_1) M_{t_2}(Z_2) ...``, multiplied left to right."""
    if len(t) != len(Z):
        raise ValueError(f"assignment of length {len(Z)} for a tuple of length {len(t)}")
    out = _eye(k * n, fld)
    for i, B in zip(t, Z):
        out = out @ elementary(i, B, k)
    return out


def coefficient_elementary(P: MatrixPolynomial, i) -> np.ndarray:
    """``M_i(-A_i)`` for ``0 <= i < k``, ``M_{-i}(A_i)`` for negative indices, ``M_k(A_k)``."""
    k = P.k
    if i == NEG_ZERO:
        raise ValueError("no coefficient matrix is attached to -0")
    if 0 <= i < k:
        return elementary(i, -P.coeffs[i], k)
    if -k <= i < 0:
        return elementary(i, P.coeffs[-i], k)
    if i == k:
        return elementary(k, P.coeffs[k], k)
    raise ValueError(f"index {i} outside -{k}..{k}")


def coefficient_product(P: MatrixPolynomial, t: Sequence[int]) -> np.ndarray:
    out = _eye(P.k * P.n, P.field)
    for i in t:
        out = out @ coefficient_elementary(P, i)
    return out


def negative_admissible_tuple(h: int, k: int) -> tuple[int, ...]:
    """``v_h = -k + w_{k-h-1}``."""
    return shift(admissible_tuple(k - h - 1), -k)


@dataclass(frozen=True)
class GfprSpec:
    """Recipe ``(h, t_w, t_v, Z_w, Z_v)`` for one block-symmetric GFPR.

    ``t_v`` holds negative indices (``k + t_v`` lies in ``0..k-h-2``); use
    :meth:`with_shifted_tv` to pass the nonnegative version instead.
    """

    h: int
    t_w: tuple[int, ...] = ()
    t_v: tuple[int, ...] = ()
    Z_w: tuple[np.ndarray, ...] = field(default=(), compare=False)
    Z_v: tuple[np.ndarray, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "t_w", tuple(int(x) for x in self.t_w))
        object.__setattr__(self, "t_v", tuple(int(x) for x in self.t_v))
        object.__setattr__(self, "Z_w", tuple(np.asarray(z) for z in self.Z_w))
        object.__setattr__(self, "Z_v", tuple(np.asarray(z) for z in self.Z_v))

    @classmethod
    def with_shifted_tv(cls, k: int, h: int, t_w=(), tv_shifted=(), Z_w=(), Z_v=()) -> GfprSpec:
        return cls(h, tuple(t_w), shift(tv_shifted, -k), tuple(Z_w), tuple(Z_v))

    def validate(self, k: int, n: int | None = None) -> None:
        h = self.h
        if not 0 <= h < k:
            raise ValueError(f"h={h} outside 0..{k - 1}")
        if any(not 0 <= x <= h - 1 for x in self.t_w):
            raise ValueError(f"t_w={self.t_w} not inside 0..{h - 1}")
        if any(not 0 <= k + x <= k - h - 2 for x in self.t_v):
            raise ValueError(f"k + t_v not inside 0..{k - h - 2}")
        if len(self.Z_w) != len(self.t_w) or len(self.Z_v) != len(self.t_v):
            raise ValueError("matrix assignment lengths do not match the tuples")
        for z in self.Z_w + self.Z_v:
            if z.ndim != 2 or z.shape[0] != z.shape[1] or (n is not None and z.shape[0] != n):
                raise ValueError(f"assignment matrix of shape {z.shape}")
        wing = self.t_w + admissible_tuple(h) + symmetric_complement(h) + rev(self.t_w)
        if not satisfies_sip(wing):
            raise ValueError(f"(t_w, w_h, c_h, rev t_w) = {wing} violates the SIP")
        vside = (
            self.t_v
            + negative_admissible_tuple(h, k)
            + shift(symmetric_complement(k - h - 1), -k)
            + rev(self.t_v)
        )
        if not satisfies_sip(vside):
            raise ValueError(f"(t_v, v_h, -k + c, rev t_v) = {vside} violates the SIP")

    def is_nonsingular_assignment(self, k: int) -> bool:
        """Matrices attached to the indices ``0`` and ``-k`` are invertible."""
        pairs = list(zip(self.t_w, self.Z_w)) + list(zip(self.t_v, self.Z_v))
        for x, z in pairs:
            if x in (0, -k):
                if field_of(z) == RATIONAL:
                    if not ql.is_nonsingular(z):
                        return False
                elif np.linalg.matrix_rank(z) < z.shape[0]:
                    return False
        return True

    def shifted_tv(self, k: int) -> tuple[int, ...]:
        return shift(self.t_v, k)


def build_gfpr(P: MatrixPolynomial, spec: GfprSpec) -> BlockPencil:
    """The pencil ``M_{t_w,t_v}(x M_{v_h} - M_{w_h}) M_{-k+c_{k-h-1}, c_h} M_{rev t_w, rev t_v}``."""
    k, n, fld = P.k, P.n, P.field
    spec.validate(k, n)
    h = spec.h
    left = product(spec.t_w, spec.Z_w, k, n, fld) @ product(spec.t_v, spec.Z_v, k, n, fld)
    right = product(rev(spec.t_w), rev(spec.Z_w), k, n, fld) @ product(
        rev(spec.t_v), rev(spec.Z_v), k, n, fld
    )
    tail = coefficient_product(
        P, shift(symmetric_complement(k - h - 1), -k) + symmetric_complement(h)
    )
    lam = left @ coefficient_product(P, negative_admissible_tuple(h, k)) @ tail @ right
    const = -(left @ coefficient_product(P, admissible_tuple(h)) @ tail @ right)
    return BlockPencil(n, lam, const)


def gfp_by_product(P: MatrixPolynomial) -> BlockPencil:
    """``x M_{-1,-3,...} - M_{0,2,...}`` straight from the elementary products."""
    k = P.k
    if k < 2:
        raise ValueError("needs grade k >= 2")
    if k % 2:
        odd, even = tuple(-i for i in range(1, k + 1, 2)), tuple(range(0, k, 2))
    else:
        _check_leading_invertible(P)
        odd, even = tuple(-i for i in range(1, k, 2)), tuple(range(0, k + 1, 2))
    return BlockPencil(P.n, coefficient_product(P, odd), -coefficient_product(P, even))


def _check_leading_invertible(P: MatrixPolynomial) -> None:
    A = P.coeffs[P.k]
    singular = not ql.is_nonsingular(A) if P.field == RATIONAL else np.linalg.matrix_rank(A) < P.n
    if singular:
        raise ValueError("even grade needs a nonsingular leading coefficient")


def gfp_T(P: MatrixPolynomial) -> BlockPencil:
    """The block-tridiagonal pencil built from the explicit block pattern."""
    k, n, fld = P.k, P.n, P.field
    if k < 2:
        raise ValueError("needs grade k >= 2")
    A = P.coeffs
    eye, zero = P.identity(), P.zero()
    grid = [[None] * k for _ in range(k)]
    # rows holding a coefficient pair alternate with rows holding a zero block
    if k % 2:
        first = 1
    else:
        _check_leading_invertible(P)
        grid[0][0] = (zero, -_inv(A[k]))
        first = 2
    for r in range(1, k + 1):
        if (r - first) % 2 == 0:
            d = k - r + 1  # coefficient pair (A_d, A_{d-1})
            grid[r - 1][r - 1] = (A[d], A[d - 1])
        elif grid[r - 1][r - 1] is None:
            grid[r - 1][r - 1] = (zero, zero)
    for r in range(1, k):
        coupling = (zero, -eye) if (r - first) % 2 == 0 else (eye, zero)
        grid[r - 1][r] = grid[r][r - 1] = coupling
    return from_block_grid(grid, n, fld)


def simple_fpr(P: MatrixPolynomial) -> BlockPencil:
    """Explicit pattern of the GFPR with ``h = k - 1`` and empty tuples."""
    k, n, fld = P.k, P.n, P.field
    if k < 2:
        raise ValueError("needs grade k >= 2")
    A = P.coeffs
    eye, zero = P.identity(), P.zero()
    odd = k % 2 == 1
    s = (k - 1) // 2 if odd else (k - 2) // 2
    body = [1] + [2 * j for j in range(1, s + 1)]
    grid = [[None] * k for _ in range(k)]

    def put(i, j, val):
        grid[i - 1][j - 1] = grid[j - 1][i - 1] = val

    put(1, 1, (A[k], A[k - 1]))
    for j in range(2, len(body) + 1):
        d = k - 2 * (j - 1)
        put(body[j - 1], body[j - 1], (-A[d], A[d - 1]))
    for j in range(1, len(body)):
        put(body[j - 1], body[j], (zero, A[k - 2 * j]))
    for j in range(1, s + 1):
        w = 2 * j + 1
        put(w, body[j - 1], (zero, -eye))
        put(w, body[j], (eye, zero))
    if not odd:
        put(k, body[-1], (zero, A[0]))
        put(k, k, (-A[0], zero))
    return from_block_grid(grid, n, fld)


def random_assignment_matrix(rng: np.random.Generator, n: int, nonsingular: bool, bound: int = 3) -> np.ndarray:
    while True:
        z = rng.integers(-bound, bound + 1, size=(n, n)).astype(object)
        if not nonsingular or ql.is_nonsingular(z):
            return z


def _random_sip_tuple(rng, values: Sequence[int], max_len: int, ok) -> tuple[int, ...]:
    """Random tuple over ``values`` accepted by ``ok``; shrinks the length on repeated failure."""
    if not values:
        return ()
    for length in range(int(rng.integers(0, max_len + 1)), -1, -1):
        for _ in range(40):
            t = tuple(int(x) for x in rng.choice(values, size=length))
            if ok(t):
                return t
    return ()


def random_spec(
    rng: np.random.Generator,
    k: int,
    h: int,
    n: int,
    max_len: int = 4,
    symmetric: bool = False,
) -> GfprSpec:
    """Random valid spec with random tuples of length ``<= max_len`` and a nonsingular assignment.

    Every assignment matrix is drawn invertible, not only those on ``0`` and ``-k``.
    """
    wbase = admissible_tuple(h) + symmetric_complement(h)
    t_w = _random_sip_tuple(
        rng, list(range(h)), max_len, lambda t: satisfies_sip(t + wbase + rev(t))
    )
    vbase = admissible_tuple(k - h - 1) + symmetric_complement(k - h - 1)
    tv_shifted = _random_sip_tuple(
        rng, list(range(k - h - 1)), max_len, lambda t: satisfies_sip(t + vbase + rev(t))
    )

    def draw(count):
        out = []
        for _ in range(count):
            z = random_assignment_matrix(rng, n, True)
            if symmetric:
                z = np.triu(z) + np.triu(z, 1).T
                while not ql.is_nonsingular(z):
                    z = random_assignment_matrix(rng, n, True)
                    z = np.triu(z) + np.triu(z, 1).T
            out.append(z)
        return tuple(out)

    spec = GfprSpec.with_shifted_tv(k, h, t_w, tv_shifted, draw(len(t_w)), draw(len(tv_shifted)))
    spec.validate(k, n)
    return spec
