"""The block-diagonal body ``M(x; Q)``, the four structured families and the antidiagonal-sum test.

Family tags: ``O1`` and ``O2`` for odd grade, ``E1`` and ``E2`` for even
grade.  ``s`` is the wing size: ``(k-1)/2`` for odd ``k``, ``(k-2)/2`` for even.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import _linalg as ql
from .blockpencil import (
    BlockPencil,
    _eye,
    _zeros,
    block_matrix,
    block_transpose,
    block_transpose_matrix,
    from_block_grid,
    perm_matrix,
    zero_pencil,
)
from .matpoly import (
    RATIONAL,
    MatrixPolynomial,
    coerce_matrix,
    field_of,
    horner_shift,
    matrix_from_json,
    matrix_to_json,
    middle_part,
    truncate_low,
)
from .minbases import PolynomialMatrix, make_K, make_Lambda

TAGS = ("O1", "O2", "E1", "E2")

# wing-scaling parameter that the skeleton sets to the identity
_SCALING = {"O1": "B", "O2": "E", "E1": "D", "E2": "D"}


def wing_size(tag: str, k: int) -> int:
    check_parity(tag, k)
    return (k - 1) // 2 if tag.startswith("O") else (k - 2) // 2


def check_parity(tag: str, k: int) -> None:
    if tag not in TAGS:
        raise ValueError(f"unknown family tag {tag!r}")
    if tag.startswith("O") and k % 2 == 0:
        raise ValueError(f"{tag} needs odd grade, got k={k}")
    if tag.startswith("E") and (k % 2 == 1 or k < 2):
        raise ValueError(f"{tag} needs even grade k >= 2, got k={k}")
    if tag == "O2" and k < 3:
        raise ValueError("O2 needs grade k >= 3")


def param_shapes(tag: str, k: int) -> dict[str, tuple[int, int]]:
    """Block shapes of the parameters of family ``tag`` at grade ``k``."""
    s = wing_size(tag, k)
    if tag == "O1":
        return {"B": (s, s), "C": (s + 1, s)}
    if tag == "O2":
        return {"B": (1, s - 1), "C": (s, s - 1), "D": (1, s - 1), "E": (s - 1, s - 1)}
    return {"B": (s + 1, s), "C": (1, s), "D": (s, s)}


def tag_for(k: int, h: int) -> str:
    """Family reached from a GFPR with parameter ``h``."""
    if k % 2:
        return "O1" if h % 2 == 0 else "O2"
    return "E1" if h % 2 else "E2"


@dataclass(frozen=True, eq=False)
class FamilyForm:
    """A family tag with its parameter block matrices (stored as ``(rows*n) x (cols*n)`` arrays)."""

    tag: str
    k: int
    n: int
    params: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        shapes = param_shapes(self.tag, self.k)
        if set(self.params) != set(shapes):
            raise ValueError(f"{self.tag} takes parameters {sorted(shapes)}, got {sorted(self.params)}")
        fixed = {}
        for name, (r, c) in shapes.items():
            arr = np.asarray(self.params[name])
            fld = field_of(arr)
            arr = coerce_matrix(arr.reshape(r * self.n, c * self.n), fld)
            fixed[name] = arr
        object.__setattr__(self, "params", fixed)

    @property
    def s(self) -> int:
        return wing_size(self.tag, self.k)

    @property
    def field(self) -> str:
        fields = {field_of(p) for p in self.params.values()}
        return RATIONAL if fields <= {RATIONAL} else "complex"

    def __getitem__(self, name: str) -> np.ndarray:
        return self.params[name]

    @classmethod
    def skeleton_form(cls, tag: str, k: int, n: int, fld: str = RATIONAL) -> FamilyForm:
        params = {}
        for name, (r, c) in param_shapes(tag, k).items():
            params[name] = _eye(r * n, fld) if name == _SCALING[tag] else _zeros(r * n, c * n, fld)
        return cls(tag, k, n, params)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FamilyForm):
            return NotImplemented
        return (self.tag, self.k, self.n) == (other.tag, other.k, other.n) and all(
            np.array_equal(self.params[p], other.params[p]) for p in self.params
        )

    __hash__ = None

    def to_json_dict(self) -> dict:
        return {
            "tag": self.tag,
            "k": self.k,
            "n": self.n,
            "field": self.field,
            "params": {name: matrix_to_json(v) for name, v in sorted(self.params.items())},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> FamilyForm:
        fld = data.get("field", RATIONAL)
        params = {name: matrix_from_json(v, fld) for name, v in data["params"].items()}
        return cls(data["tag"], int(data["k"]), int(data["n"]), params)


def m_of(Q: MatrixPolynomial) -> BlockPencil:
    """``diag(x Q_d + Q_{d-1}, x Q_{d-2} + Q_{d-3}, ..., x Q_1 + Q_0)`` for odd grade ``d``."""
    d = Q.k
    if d % 2 == 0:
        raise ValueError(f"body pencil needs odd grade, got {d}")
    m = (d + 1) // 2
    grid = [[None] * m for _ in range(m)]
    for j in range(m):
        top = d - 2 * j
        grid[j][j] = (Q.coeffs[top], Q.coeffs[top - 1])
    return from_block_grid(grid, Q.n, Q.field)


def _bt(X: np.ndarray, n: int) -> np.ndarray:
    return block_transpose_matrix(X, n)


def _wing_and_mirror(X: np.ndarray, K: BlockPencil, n: int) -> tuple[BlockPencil, BlockPencil]:
    """``X K`` and its block transpose ``K^T X^B``."""
    return X @ K, K.transpose() @ _bt(X, n)


def _single(n: int, fld: str, lam=None, const=None) -> BlockPencil:
    z = _zeros(n, n, fld)
    return BlockPencil(
        n,
        z if lam is None else np.asarray(lam),
        z if const is None else np.asarray(const),
    )


def _edge_row(width: int, n: int, fld: str, pos: int, lam=None, const=None) -> BlockPencil:
    """``1 x width`` block row that is zero except at block ``pos`` (one-based)."""
    blocks = [[None] * width]
    z = _zeros(n, n, fld)
    blocks[0][pos - 1] = (z if lam is None else lam, z if const is None else const)
    return from_block_grid(blocks, n, fld)


def build_family(P: MatrixPolynomial, form: FamilyForm) -> BlockPencil:
    """Instantiate the block template of ``form.tag`` at ``P`` with the given parameters."""
    k, n = P.k, P.n
    if form.k != k or form.n != n:
        raise ValueError(f"form is for (k, n) = {(form.k, form.n)}, polynomial has {(k, n)}")
    fld = P.field if form.field == P.field else "complex"
    if fld != P.field:
        P = P.to_complex()
    A = P.coeffs
    s = form.s
    pr = {name: (v if field_of(v) == fld else np.array(v.tolist(), dtype=complex)) for name, v in form.params.items()}
    Z = lambda r, c: zero_pencil(n, r, c, fld)

    if form.tag == "O1":
        K = make_K(s, n, fld)
        BK, KBt = _wing_and_mirror(pr["B"], K, n)
        CK, KCt = _wing_and_mirror(pr["C"], K, n)
        return block_matrix([[m_of(P) + CK + KCt, KBt], [BK, Z(s, s)]])

    if form.tag == "O2":
        K = make_K(s - 1, n, fld)
        BK, KBt = _wing_and_mirror(pr["B"], K, n)
        CK, KCt = _wing_and_mirror(pr["C"], K, n)
        DK, KDt = _wing_and_mirror(pr["D"], K, n)
        EK, KEt = _wing_and_mirror(pr["E"], K, n)
        top = _edge_row(s, n, fld, 1, lam=A[k])
        bottom = _edge_row(s, n, fld, s, const=A[0])
        body = m_of(middle_part(P)) + CK + KCt
        return block_matrix([
            [_single(n, fld, const=-A[k]), top + BK, Z(1, 1), Z(1, s - 1)],
            [block_transpose(top) + KBt, body, block_transpose(bottom) + KDt, KEt],
            [Z(1, 1), bottom + DK, _single(n, fld, lam=-A[0]), Z(1, s - 1)],
            [Z(s - 1, 1), EK, Z(s - 1, 1), Z(s - 1, s - 1)],
        ])

    K = make_K(s, n, fld)
    BK, KBt = _wing_and_mirror(pr["B"], K, n)
    CK, KCt = _wing_and_mirror(pr["C"], K, n)
    DK, KDt = _wing_and_mirror(pr["D"], K, n)
    if form.tag == "E1":
        bottom = _edge_row(s + 1, n, fld, s + 1, const=A[0])
        return block_matrix([
            [m_of(horner_shift(P)) + BK + KBt, block_transpose(bottom) + KCt, KDt],
            [bottom + CK, _single(n, fld, lam=-A[0]), Z(1, s)],
            [DK, Z(s, 1), Z(s, s)],
        ])
    top = _edge_row(s + 1, n, fld, 1, lam=A[k])
    return block_matrix([
        [_single(n, fld, const=-A[k]), top + CK, Z(1, s)],
        [block_transpose(top) + KCt, m_of(truncate_low(P)) + BK + KBt, KDt],
        [Z(s, 1), DK, Z(s, s)],
    ])


def skeleton(P: MatrixPolynomial, tag: str) -> BlockPencil:
    """The family member with zero coupling parameters and identity wing scaling."""
    return build_family(P, FamilyForm.skeleton_form(tag, P.k, P.n, P.field))


def o1_congruence_factor(form: FamilyForm) -> np.ndarray:
    """``[[I, C], [0, B]]``; conjugating the O1 skeleton by it gives the O1 member."""
    if form.tag != "O1":
        raise ValueError("factor defined for O1 only")
    n, s = form.n, form.s
    fld = form.field
    top = np.concatenate([_eye((s + 1) * n, fld), form["C"]], axis=1)
    bottom = np.concatenate([_zeros(s * n, (s + 1) * n, fld), form["B"]], axis=1)
    return np.concatenate([top, bottom], axis=0)


def natural_partition(tag: str, k: int) -> tuple[tuple[int, ...], list[int], list[int]]:
    """Column permutation plus body rows and columns exposing the minimal-bases structure.

    For O2 and E2 the first block column is moved to position ``s + 2``.
    """
    s = wing_size(tag, k)
    if tag in ("O2", "E2"):
        cols = tuple(range(2, s + 3)) + (1,) + tuple(range(s + 3, k + 1))
    else:
        cols = tuple(range(1, k + 1))
    rows = s + 2 if tag in ("E1", "E2") else s + 1
    return cols, list(range(1, rows + 1)), list(range(1, s + 2))


def permute_columns(L: BlockPencil, cols: Sequence[int]) -> BlockPencil:
    return L @ perm_matrix(cols, L.n, L.field)


def antidiagonal_sums(M: BlockPencil) -> list[np.ndarray]:
    """``AS(M, s)`` for ``s = 0..p+q+1`` with one-based block indices."""
    rows, cols = M.rows, M.cols
    k = rows + cols - 1
    n, fld = M.n, M.field
    out = []
    for s in range(k + 1):
        acc = _zeros(n, n, fld)
        for i in range(1, rows + 1):
            for j in range(1, cols + 1):
                X, Y = M.block(i, j)
                if i + j == k + 2 - s:
                    acc = acc + X
                if i + j == k + 1 - s:
                    acc = acc + Y
        out.append(acc)
    return out


def as_condition(M: BlockPencil, P: MatrixPolynomial) -> tuple[bool, list[np.ndarray]]:
    """Whether every antidiagonal sum of ``M`` equals the matching coefficient of ``P``."""
    if M.rows + M.cols - 1 != P.k or M.n != P.n:
        raise ValueError(f"{M.rows}x{M.cols} body does not fit grade {P.k}")
    sums = antidiagonal_sums(M)
    ok = all(np.array_equal(a, b) for a, b in zip(sums, P.coeffs))
    return ok, sums


def as_violations(M: BlockPencil, P: MatrixPolynomial) -> list[int]:
    _, sums = as_condition(M, P)
    return [s for s, (a, b) in enumerate(zip(sums, P.coeffs)) if not np.array_equal(a, b)]


def lambda_sandwich(M: BlockPencil) -> PolynomialMatrix:
    """``(Lambda_q (x) I) M (Lambda_p (x) I)^T`` as a polynomial matrix."""
    q, p = M.rows - 1, M.cols - 1
    return make_Lambda(q, M.n, M.field) @ M @ make_Lambda(p, M.n, M.field).transpose()


def as_equiv_product_check(M: BlockPencil, P: MatrixPolynomial) -> bool:
    """Compare the antidiagonal-sum test with the symbolic sandwich product equal to ``P``."""
    holds, _ = as_condition(M, P)
    prod = lambda_sandwich(M)
    coeffs = list(prod.coeffs) + [P.zero()] * max(0, P.k + 1 - len(prod.coeffs))
    equal = len(coeffs) <= P.k + 1 or all(not np.any(c != 0) for c in coeffs[P.k + 1:])
    equal = equal and all(np.array_equal(a, b) for a, b in zip(coeffs, P.coeffs))
    return holds == equal


@dataclass(frozen=True)
class LinearizationReport:
    """Sufficient conditions only: ``holds`` false is inconclusive."""

    tag: str
    conditions: dict[str, bool]

    @property
    def holds(self) -> bool:
        return all(self.conditions.values())


def _nonsingular(A: np.ndarray) -> bool:
    if field_of(A) == RATIONAL:
        return ql.is_nonsingular(A)
    return A.shape[0] == A.shape[1] and np.linalg.matrix_rank(A) == A.shape[0]


def linearization_conditions(form: FamilyForm, P: MatrixPolynomial) -> LinearizationReport:
    """Sufficient nonsingularity conditions for a member of ``form.tag`` to be a strong linearization."""
    n, k = form.n, form.k
    conds: dict[str, bool] = {}
    if form.tag in ("O2", "E1"):
        conds["A0"] = _nonsingular(P.coeffs[0])
    if form.tag in ("O2", "E2"):
        conds[f"A{k}"] = _nonsingular(P.coeffs[k])
    name = _SCALING[form.tag]
    X = form[name]
    conds[name] = _nonsingular(X)
    conds[name + "^B"] = _nonsingular(block_transpose_matrix(X, n))
    return LinearizationReport(form.tag, conds)
