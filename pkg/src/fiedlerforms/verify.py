"""Spectral checks of linearizations against the first Frobenius companion form."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from . import _linalg as ql
from .blockpencil import BlockPencil, _eye, _zeros
from .matpoly import RATIONAL, MatrixPolynomial, evaluate, is_regular

DEFAULT_TOL = 1e-8


class SingularPolynomialError(ValueError):
    """Spectral comparison was requested for a polynomial with identically zero determinant."""


def frobenius_companion(P: MatrixPolynomial) -> BlockPencil:
    """``[[x A_k + A_{k-1}, A_{k-2}, ..., A_0], [-I, x I, 0, ...], ..., [..., -I, x I]]``."""
    n, k, fld = P.n, P.k, P.field
    if k < 1:
        raise ValueError("grade must be at least 1")
    lam = _zeros(k * n, k * n, fld)
    const = _zeros(k * n, k * n, fld)
    lam[:n, :n] = P.coeffs[k]
    const[:n, :n] = P.coeffs[k - 1]
    for j in range(1, k):
        const[:n, j * n:(j + 1) * n] = P.coeffs[k - 1 - j]
    eye = _eye(n, fld)
    for i in range(1, k):
        const[i * n:(i + 1) * n, (i - 1) * n:i * n] = -eye
        lam[i * n:(i + 1) * n, i * n:(i + 1) * n] = eye
    return BlockPencil(n, lam, const)


def homogeneous_eigenvalues(L: BlockPencil) -> np.ndarray:
    """Pairs ``(a, b)`` with ``det(a X + b Y) = 0`` for ``L = x X + Y``; ``b = 0`` is infinity."""
    X = np.array(L.lam, dtype=complex)
    Y = np.array(L.const, dtype=complex)
    w = scipy.linalg.eig(-Y, X, right=False, homogeneous_eigvals=True)
    pairs = np.asarray(w).T
    norms = np.linalg.norm(pairs, axis=1)
    if np.any(norms == 0):
        raise SingularPolynomialError("the pencil is singular (0/0 eigenvalue)")
    return pairs / norms[:, None]


def chordal_distance(x, y) -> float:
    """``|x - y| / (sqrt(1+|x|^2) sqrt(1+|y|^2))`` with ``inf`` as the north pole."""
    if np.isinf(x) and np.isinf(y):
        return 0.0
    if np.isinf(x):
        return 1.0 / float(np.sqrt(1 + abs(y) ** 2))
    if np.isinf(y):
        return 1.0 / float(np.sqrt(1 + abs(x) ** 2))
    return float(abs(x - y) / (np.sqrt(1 + abs(x) ** 2) * np.sqrt(1 + abs(y) ** 2)))


def _chordal_matrix(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Chordal distances between unit homogeneous pairs."""
    cross = p[:, None, 0] * q[None, :, 1] - p[:, None, 1] * q[None, :, 0]
    return np.abs(cross)


def to_points(pairs: np.ndarray) -> np.ndarray:
    """Homogeneous pairs to points of the extended plane."""
    out = np.empty(len(pairs), dtype=complex)
    for i, (a, b) in enumerate(pairs):
        out[i] = complex("inf") if abs(b) <= 1e-14 * abs(a) else a / b
    return out


@dataclass(frozen=True)
class SpectralReport:
    distances: tuple[float, ...]
    pencil_eigenvalues: tuple[complex, ...]
    oracle_eigenvalues: tuple[complex, ...]
    tol: float
    finite: int
    infinite: int
    counts_agree: bool
    notes: tuple[str, ...] = field(default=())

    @property
    def max_distance(self) -> float:
        return max(self.distances, default=0.0)

    @property
    def passed(self) -> bool:
        return self.counts_agree and self.max_distance < self.tol

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_chordal_distance": self.max_distance,
            "tol": self.tol,
            "finite": self.finite,
            "infinite": self.infinite,
            "counts_agree": self.counts_agree,
            "notes": list(self.notes),
        }


def match_spectra(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Chordal distances of the minimum-total-distance pairing of two spectra."""
    cost = _chordal_matrix(p, q)
    rows, cols = linear_sum_assignment(cost)
    return cost[rows, cols]


def check_strong_linearization(L: BlockPencil, P: MatrixPolynomial, tol: float = DEFAULT_TOL) -> SpectralReport:
    """Compare the generalized eigenvalues of ``L`` with those of the companion form of ``P``."""
    if L.rows != L.cols or L.rows * L.n != P.k * P.n or L.n != P.n:
        raise ValueError("pencil size does not match k*n")
    if not is_regular(P):
        raise SingularPolynomialError("P has identically zero determinant")
    mine = homogeneous_eigenvalues(L)
    oracle = homogeneous_eigenvalues(frobenius_companion(P))
    dist = match_spectra(mine, oracle)
    pts_l, pts_o = to_points(mine), to_points(oracle)
    inf_l = int(np.sum(np.isinf(pts_l)))
    inf_o = int(np.sum(np.isinf(pts_o)))
    notes = () if inf_l == inf_o else (f"infinite eigenvalue counts differ: {inf_l} vs {inf_o}",)
    return SpectralReport(
        tuple(float(d) for d in dist),
        tuple(pts_l),
        tuple(pts_o),
        tol,
        len(pts_o) - inf_o,
        inf_o,
        len(mine) == len(oracle) and inf_l == inf_o,
        notes,
    )


def infinite_ev_count(L: BlockPencil, P: MatrixPolynomial, rtol: float = 1e-10) -> tuple[int, int]:
    """Nullity of the leading coefficient of ``L`` and of ``A_k``.

    Exact over the rationals; for complex data the numeric rank uses singular
    values above ``rtol`` times the largest.
    """
    if L.field == RATIONAL and P.field == RATIONAL:
        return ql.nullity(L.lam), ql.nullity(P.coeffs[-1])

    def numeric_nullity(a):
        a = np.array(a, dtype=complex)
        sv = np.linalg.svd(a, compute_uv=False)
        top = sv[0] if sv.size else 0.0
        return int(a.shape[1] - np.sum(sv > rtol * max(top, 1.0)))

    return numeric_nullity(L.lam), numeric_nullity(P.coeffs[-1])


def determinant_ratio(L: BlockPencil, P: MatrixPolynomial, rng: np.random.Generator | None = None) -> Fraction | None:
    """Exact constant ``c`` with ``det L(x) = c det P(x)`` for all ``x``, or ``None``.

    Both determinants have degree at most ``k n``; agreement of ``det L - c det P``
    at ``k n + 1`` distinct points proves the polynomial identity.
    """
    if L.field != RATIONAL or P.field != RATIONAL:
        raise ValueError("exact determinant comparison needs rational data")
    rng = rng or np.random.default_rng(0)
    N = P.k * P.n
    points: list[Fraction] = []
    while len(points) < N + 1:
        x = Fraction(int(rng.integers(-60, 61)), int(rng.integers(1, 12)))
        if x not in points:
            points.append(x)
    ratio = None
    for x in points:
        dl = ql.det(np.array(L.lam * x + L.const, dtype=object))
        dp = ql.det(evaluate(P, x))
        if dp == 0:
            if dl != 0:
                return None
            continue
        r = Fraction(dl) / Fraction(dp)
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    return ratio


def same_spectrum_exact(L1: BlockPencil, L2: BlockPencil, rng: np.random.Generator | None = None) -> bool:
    """``det L1(x) == det L2(x)`` as polynomials, by exact evaluation at enough points."""
    rng = rng or np.random.default_rng(0)
    N = L1.rows * L1.n
    seen: set[Fraction] = set()
    while len(seen) < N + 1:
        x = Fraction(int(rng.integers(-60, 61)), int(rng.integers(1, 12)))
        if x in seen:
            continue
        seen.add(x)
        d1 = ql.det(np.array(L1.lam * x + L1.const, dtype=object))
        d2 = ql.det(np.array(L2.lam * x + L2.const, dtype=object))
        if d1 != d2:
            return False
    return True


def well_conditioned(P: MatrixPolynomial, threshold: float = 1e-6) -> bool:
    """Reject draws whose companion spectrum is numerically fragile.

    Uses the smallest gap between distinct eigenvalues (chordal) as a proxy:
    near-multiple eigenvalues amplify rounding by the inverse gap.
    """
    pairs = homogeneous_eigenvalues(frobenius_companion(P))
    d = _chordal_matrix(pairs, pairs)
    np.fill_diagonal(d, np.inf)
    return bool(d.min() > threshold) if len(pairs) > 1 else True
