"""Exact linear algebra over the rationals on numpy object arrays.

Entries are Python ``int`` or :class:`fractions.Fraction`.  Integers are kept
as ``int`` so that integer data (the common case) multiplies at native speed;
every division goes through ``Fraction`` so results never become floats.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np


def exact_scalar(x) -> int | Fraction:
    """Convert ``x`` to an exact rational (``int`` when integral)."""
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, str):
        q = Fraction(x.strip())
    elif isinstance(x, Rational):
        q = Fraction(x.numerator, x.denominator)
    elif isinstance(x, (float, np.floating)):
        q = Fraction(float(x))
    elif isinstance(x, (complex, np.complexfloating)):
        if complex(x).imag != 0:
            raise ValueError(f"complex value {x!r} in a rational matrix")
        q = Fraction(complex(x).real)
    else:
        raise TypeError(f"cannot convert {type(x).__name__} to a rational")
    return q.numerator if q.denominator == 1 else q


def exact_array(a) -> np.ndarray:
    """Object array of exact rationals with the shape of ``a``."""
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = exact_scalar(x)
    return out


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=object)


def _echelon(a: np.ndarray) -> tuple[list[list], list[int]]:
    """Row echelon form as nested lists, plus the pivot columns."""
    m = [[Fraction(x) for x in row] for row in a.tolist()]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: np.ndarray) -> int:
    a = np.asarray(a, dtype=object)
    if a.size == 0:
        return 0
    return len(_echelon(a)[1])


def is_nonsingular(a: np.ndarray) -> bool:
    a = np.asarray(a, dtype=object)
    return a.shape[0] == a.shape[1] and rank(a) == a.shape[0]


def det(a: np.ndarray) -> int | Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in np.asarray(a, dtype=object).tolist()]
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return exact_scalar(result)


def inverse(a: np.ndarray) -> np.ndarray:
    """Exact inverse; raises ``ValueError`` for singular input."""
    a = np.asarray(a, dtype=object)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([a, identity(n)], axis=1)
    m, pivots = _echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return exact_array([row[n:] for row in m])


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One exact solution ``x`` of ``a @ x = b`` (free variables set to zero).

    Returns ``None`` when the system is inconsistent.
    """
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    nvar = a.shape[1]
    m, pivots = _echelon(np.concatenate([a, b], axis=1))
    if any(p >= nvar for p in pivots):
        return None
    x = zeros(nvar, b.shape[1])
    for r, c in enumerate(pivots):
        for j in range(b.shape[1]):
            x[c, j] = exact_scalar(m[r][nvar + j])
    return x


def nullity(a: np.ndarray) -> int:
    a = np.asarray(a, dtype=object)
    return a.shape[1] - rank(a)
