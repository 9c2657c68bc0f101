"""Block-permutation congruences carrying block-symmetric GFPR into the four structured families.

The main route is constructive: the pencil splits at its center block into
two smaller GFPR, a combinatorial tracker follows each half through its tuple
of outer factors, and the halves are interleaved into the target layout.
The family parameters are then read off the permuted pencil and the result is
certified by exact comparison with the family template.  An exhaustive search
over all permutations, which solves for the parameters as one linear system,
serves as an independent check for small grades.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from functools import cache

import numpy as np

from . import _linalg as ql
from .blockpencil import (
    BlockPencil,
    BlockPermutation,
    _eye,
    _zeros,
    as_permutation,
    block_transpose_matrix,
    congruence,
)
from .families import (
    FamilyForm,
    build_family,
    check_parity,
    param_shapes,
    skeleton,
    tag_for,
    wing_size,
)
from .fiedler import GfprSpec, build_gfpr, gfp_T
from .matpoly import RATIONAL, MatrixPolynomial, coefficient_window, field_of
from .tuples import (
    IndexType,
    admissible_tuple,
    heads,
    index_type,
    rev,
    shift,
    symmetric_complement,
    updated_heads,
)


class CertificateError(RuntimeError):
    """The constructed permutation and parameters failed exact verification."""


@dataclass(frozen=True, eq=False)
class CongruenceCertificate:
    c: BlockPermutation
    form: FamilyForm
    verified: bool

    @property
    def tag(self) -> str:
        return self.form.tag

    def to_json_dict(self) -> dict:
        return {
            "c": list(self.c.c),
            "tag": self.form.tag,
            "params": self.form.to_json_dict()["params"],
            "verified": self.verified,
        }


# --- splitting ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GfprSplit:
    """The two overlapping diagonal pieces of a GFPR and their own recipes."""

    F: BlockPencil
    F_poly: MatrixPolynomial
    F_spec: GfprSpec
    G: BlockPencil
    G_poly: MatrixPolynomial
    G_spec: GfprSpec


def split_gfpr(P: MatrixPolynomial, spec: GfprSpec, L: BlockPencil | None = None) -> GfprSplit:
    """Cut ``L`` at the center block ``x A_{h+1} + A_h`` and rebuild both pieces independently.

    ``G`` is the leading ``k-h`` blocks (a GFPR of ``A_h..A_k`` with parameter 0),
    ``F`` the trailing ``h+1`` blocks (a GFPR of ``A_0..A_{h+1}`` with parameter ``h``).
    """
    k, h = P.k, spec.h
    spec.validate(k, P.n)
    L = build_gfpr(P, spec) if L is None else L
    kz = k - h
    center = L.block(kz, kz)
    if not (np.array_equal(center[0], P.coeffs[h + 1]) and np.array_equal(center[1], P.coeffs[h])):
        raise CertificateError(f"center block ({kz}, {kz}) is not x A_{h + 1} + A_{h}")
    if kz > 1 and h > 0 and not L.sub(range(1, kz), range(kz + 1, k + 1)).is_zero():
        raise CertificateError("blocks coupling the two pieces outside the center are not zero")
    F_poly = coefficient_window(P, 0, h + 1)
    G_poly = coefficient_window(P, h, k)
    F_spec = GfprSpec(h, spec.t_w, (), spec.Z_w, ())
    G_spec = GfprSpec(0, (), shift(spec.t_v, h), (), spec.Z_v)
    F = L.sub(range(kz, k + 1), range(kz, k + 1))
    G = L.sub(range(1, kz + 1), range(1, kz + 1))
    if build_gfpr(F_poly, F_spec) != F:
        raise CertificateError("trailing piece differs from its own GFPR")
    if build_gfpr(G_poly, G_spec) != G:
        raise CertificateError("leading piece differs from its own GFPR")
    return GfprSplit(F, F_poly, F_spec, G, G_poly, G_spec)


# --- combinatorial tracking ---------------------------------------------------


@dataclass(frozen=True)
class RowLayout:
    """Rows of a pencil grouped by the role they play after the permutation.

    ``body`` is listed in template order, ``exceptional`` is ``None`` for odd size.
    """

    size: int
    body: tuple[int, ...]
    exceptional: int | None
    wings: tuple[int, ...]

    @property
    def permutation(self) -> BlockPermutation:
        extra = () if self.exceptional is None else (self.exceptional,)
        return BlockPermutation(self.body + extra + self.wings)

    def relabel(self, mapping: dict[int, int]) -> RowLayout:
        m = mapping.get
        return RowLayout(
            self.size,
            tuple(m(r, r) for r in self.body),
            None if self.exceptional is None else m(self.exceptional, self.exceptional),
            tuple(m(r, r) for r in self.wings),
        )


def base_layout(k: int) -> RowLayout:
    """Layout of the GFPR with ``h = k-1`` and empty tuples."""
    evens = tuple(range(2, k + 1, 2))
    odds = tuple(range(3, k + 1, 2))
    if k % 2:
        return RowLayout(k, (1,) + evens, None, odds)
    return RowLayout(k, (1,) + evens[:-1], k, odds)


def track_layout(k: int, t_w: Sequence[int], check: bool = True) -> RowLayout:
    """Follow the layout through the outer factors ``M_x(Z) . M_x(Z)``, innermost first.

    An index whose right neighbour row ``k-x+1`` is not a wing row exchanges
    the roles of rows ``k-x`` and ``k-x+1``; otherwise nothing moves.
    """
    layout = base_layout(k)
    T = admissible_tuple(k - 1) + symmetric_complement(k - 1)
    hs = heads(T) if check else frozenset()
    for x in reversed(tuple(t_w)):
        wings = set(layout.wings)
        if k - x not in wings:
            raise CertificateError(f"row {k - x} hit by index {x} is not a wing row")
        target = k - x + 1
        if x != 0 and target not in wings:
            layout = _swap_rows(layout, k - x, target)
            moved = True
        else:
            moved = False
        if check:
            kind = index_type(T, x)
            if moved and kind is not IndexType.TYPE_I:
                raise CertificateError(f"index {x} moved rows but is of type II")
            if updated_heads(hs, x, kind) != heads(T + (x,)):
                raise CertificateError(f"head update rule failed for index {x}")
        T = (x,) + T + (x,)
        if check:
            hs = heads(T)
    return layout


def _swap_rows(layout: RowLayout, a: int, b: int) -> RowLayout:
    return layout.relabel({a: b, b: a})


def reversed_half_layout(kz: int, t_v_local: Sequence[int]) -> RowLayout:
    """Layout for the leading piece (parameter 0), via conjugation by the block anti-identity.

    The reversed pencil is a GFPR with parameter ``kz-1`` whose outer tuple is
    ``t_v + kz``; its layout is mirrored back, so roles appear in reverse order.
    """
    hat = track_layout(kz, shift(t_v_local, kz))
    mirror = {r: kz + 1 - r for r in range(1, kz + 1)}
    flipped = hat.relabel(mirror)
    return RowLayout(kz, rev(flipped.body), flipped.exceptional, rev(flipped.wings))


def combined_permutation(k: int, h: int, t_w: Sequence[int], t_v: Sequence[int]) -> BlockPermutation:
    """Interleave the layouts of both pieces into the layout of the target family."""
    kz, kf = k - h, h + 1
    G = reversed_half_layout(kz, shift(t_v, h))
    F = track_layout(kf, t_w).relabel({f: kz - 1 + f for f in range(1, kf + 1)})
    if F.body[0] != kz or G.body[-1] != kz:
        raise CertificateError("center row is not shared by both pieces")
    tag = tag_for(k, h)
    body = G.body + F.body[1:]
    wings = G.wings + F.wings
    if tag == "O1":
        c = body + wings
    elif tag == "O2":
        c = (G.exceptional,) + body + (F.exceptional,) + wings
    elif tag == "E1":
        c = body + (F.exceptional,) + wings
    else:
        c = (G.exceptional,) + body + wings
    return BlockPermutation(c)


# --- parameter extraction (direct reading) ------------------------------------


def _lam_block(D: BlockPencil, i: int, j: int) -> np.ndarray:
    return D.block(i, j)[0]


def _read_wing(D: BlockPencil, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
    """``X`` from a term ``X K_m`` spread over ``rows`` x ``cols``: the shifted x-part."""
    n = D.n
    rows, cols = list(rows), list(cols)
    m = len(cols) - 1
    X = _zeros(len(rows) * n, m * n, D.field)
    for a, r in enumerate(rows):
        for j in range(m):
            X[a * n:(a + 1) * n, j * n:(j + 1) * n] = _lam_block(D, r, cols[j + 1])
    return X


def _read_coupling(D: BlockPencil, cols: Sequence[int]) -> np.ndarray:
    """``X`` from ``X K_m + K_m^T X^B`` on the square index set ``cols`` (``m + 1`` blocks).

    Row ``r`` of ``X`` follows from the x-part of row ``r`` once column ``r-1``
    is known; column ``r`` then follows from the constant part.
    """
    n = D.n
    cols = list(cols)
    m = len(cols) - 1
    X: dict[tuple[int, int], np.ndarray] = {}
    zero = _zeros(n, n, D.field)

    def get(a, j):
        if j < 1 or j > m:
            return zero
        return X[(a, j)]

    for r in range(1, m + 2):
        for j in range(r, m + 1):
            X[(r, j)] = D.block(cols[r - 1], cols[j])[0] - get(j + 1, r - 1)
        if r <= m:
            for a in range(r + 1, m + 2):
                X[(a, r)] = -D.block(cols[a - 1], cols[r - 1])[1] - get(r, a)
    out = _zeros((m + 1) * n, m * n, D.field)
    for (a, j), blk in X.items():
        out[(a - 1) * n:a * n, (j - 1) * n:j * n] = blk
    return out


def _zero_form(tag: str, k: int, n: int, fld: str) -> FamilyForm:
    return FamilyForm(
        tag, k, n, {p: _zeros(r * n, c * n, fld) for p, (r, c) in param_shapes(tag, k).items()}
    )


def extract_form(Lc: BlockPencil, P: MatrixPolynomial, tag: str) -> FamilyForm:
    """Read the family parameters off a permuted pencil assumed to lie in family ``tag``."""
    k, n = P.k, P.n
    s = wing_size(tag, k)
    D = Lc - build_family(P, _zero_form(tag, k, n, Lc.field))
    if tag == "O1":
        body = range(1, s + 2)
        params = {"B": _read_wing(D, range(s + 2, k + 1), body), "C": _read_coupling(D, body)}
    elif tag == "O2":
        mid = range(2, s + 2)
        params = {
            "B": _read_wing(D, [1], mid),
            "C": _read_coupling(D, mid),
            "D": _read_wing(D, [s + 2], mid),
            "E": _read_wing(D, range(s + 3, k + 1), mid),
        }
    elif tag == "E1":
        body = range(1, s + 2)
        params = {
            "B": _read_coupling(D, body),
            "C": _read_wing(D, [s + 2], body),
            "D": _read_wing(D, range(s + 3, k + 1), body),
        }
    else:
        body = range(2, s + 3)
        params = {
            "B": _read_coupling(D, body),
            "C": _read_wing(D, [1], body),
            "D": _read_wing(D, range(s + 3, k + 1), body),
        }
    return FamilyForm(tag, k, n, params)


# --- main engine --------------------------------------------------------------


def certify(L: BlockPencil, P: MatrixPolynomial, c, tag: str) -> CongruenceCertificate:
    """Permute, read parameters, and demand exact equality with the family template."""
    c = as_permutation(c)
    Lc = congruence(L, c)
    form = extract_form(Lc, P, tag)
    if build_family(P, form) != Lc:
        raise CertificateError(f"permuted pencil does not match the {tag} template for c={c.c}")
    return CongruenceCertificate(c, form, True)


def main_permutation(P: MatrixPolynomial, spec: GfprSpec) -> CongruenceCertificate:
    """Certified permutation and family parameters for the GFPR described by ``spec``."""
    L = build_gfpr(P, spec)
    split_gfpr(P, spec, L)
    c = combined_permutation(P.k, spec.h, spec.t_w, spec.t_v)
    return certify(L, P, c, tag_for(P.k, spec.h))


def gfp_permutation(k: int) -> BlockPermutation:
    """``(1, 3, 5, ..., k, 2, 4, ..., k-1)``."""
    if k % 2 == 0:
        raise ValueError("defined for odd grade only")
    return BlockPermutation(tuple(range(1, k + 1, 2)) + tuple(range(2, k, 2)))


def gfp_congruence(P: MatrixPolynomial) -> CongruenceCertificate:
    """Permutation carrying the block-tridiagonal GFP to the O1 skeleton (odd grade)."""
    if P.k % 2 == 0:
        raise ValueError("the block-tridiagonal pencil is only reduced for odd grade")
    c = gfp_permutation(P.k)
    if congruence(gfp_T(P), c) != skeleton(P, "O1"):
        raise CertificateError("permuted pencil differs from the O1 skeleton")
    return CongruenceCertificate(c, FamilyForm.skeleton_form("O1", P.k, P.n, P.field), True)


def wing_rows(cert: CongruenceCertificate) -> frozenset[int]:
    """Original block rows that the certified permutation sends to wing positions."""
    k = cert.form.k
    first = cert.form.s + (2 if cert.tag == "O1" else 3)
    return frozenset(cert.c[p] for p in range(first, k + 1))


def plain_wing_rows(L: BlockPencil, cert: CongruenceCertificate) -> frozenset[int]:
    """Wing rows whose permuted block row is exactly ``-I`` then ``x I`` on adjacent body columns."""
    Lc = congruence(L, cert.c)
    k, n, s = cert.form.k, cert.form.n, cert.form.s
    offset = 1 if cert.tag in ("O2", "E2") else 0
    nbody = s + 1
    eye = _eye(n, Lc.field)
    out = set()
    for p in range(s + (2 if cert.tag == "O1" else 3), k + 1):
        row = Lc.sub([p], range(1, k + 1))
        for i in range(1, nbody):
            lam = _zeros(n, k * n, Lc.field)
            const = _zeros(n, k * n, Lc.field)
            col = offset + i - 1
            const[:, col * n:(col + 1) * n] = -eye
            lam[:, (col + 1) * n:(col + 2) * n] = eye
            if np.array_equal(row.lam, lam) and np.array_equal(row.const, const):
                out.add(cert.c[p])
                break
    return frozenset(out)


# --- exhaustive oracle --------------------------------------------------------


def _parity_tags(k: int) -> tuple[str, ...]:
    if k % 2:
        return ("O1", "O2") if k >= 3 else ("O1",)
    return ("E1", "E2")


@cache
def _template_system(tag: str, k: int):
    """Scalar pattern of every parameter block in the template, and the structural zeros.

    Returns ``(units, A, pivot_rows, inverse, zero_mask)`` where ``A`` maps the
    vector of parameter blocks to the x-parts and constant parts of all blocks.
    """
    from .matpoly import from_scalars

    P0 = from_scalars([0] * (k + 1))
    units = [(p, i, j) for p, (r, c) in param_shapes(tag, k).items() for i in range(r) for j in range(c)]
    cols = []
    for unit in units:
        params = {p: ql.zeros(r, c) for p, (r, c) in param_shapes(tag, k).items()}
        params[unit[0]][unit[1], unit[2]] = 1
        T = build_family(P0, FamilyForm(tag, k, 1, params))
        cols.append(np.concatenate([T.lam.reshape(-1), T.const.reshape(-1)]))
    A = np.array(cols, dtype=object).T if cols else ql.zeros(2 * k * k, 0)
    pivot_rows: list[int] = []
    for r in range(A.shape[0]):
        trial = pivot_rows + [r]
        if ql.rank(A[trial]) == len(trial):
            pivot_rows = trial
        if len(pivot_rows) == len(units):
            break
    if len(pivot_rows) != len(units):
        raise AssertionError(f"{tag} template parameters are not identifiable")
    inverse = ql.inverse(A[pivot_rows]) if units else ql.zeros(0, 0)
    rng = np.random.default_rng(12345)
    Prand = from_scalars([int(x) for x in rng.integers(1, 9, size=k + 1)])
    rand_params = {
        p: np.array(rng.integers(1, 9, size=(r, c)), dtype=object)
        for p, (r, c) in param_shapes(tag, k).items()
    }
    T = build_family(Prand, FamilyForm(tag, k, 1, rand_params))
    zero_mask = (T.lam == 0) & (T.const == 0)
    return units, inverse, pivot_rows, zero_mask


def match_family(Lc: BlockPencil, P: MatrixPolynomial, tag: str) -> FamilyForm | None:
    """Solve for the parameters of ``tag`` as a linear system; ``None`` if ``Lc`` is not a member."""
    k, n = P.k, P.n
    units, inverse, pivot_rows, zero_mask = _template_system(tag, k)
    for i, j in zip(*np.nonzero(zero_mask)):
        if np.any(Lc.lam[i * n:(i + 1) * n, j * n:(j + 1) * n] != 0) or np.any(
            Lc.const[i * n:(i + 1) * n, j * n:(j + 1) * n] != 0
        ):
            return None
    R = Lc - build_family(P, _zero_form(tag, k, n, Lc.field))
    # right-hand side: one row per scalar position of the k x k pattern, n*n entries each
    blocks = []
    for part in (R.lam, R.const):
        grid = part.reshape(k, n, k, n).transpose(0, 2, 1, 3).reshape(k * k, n * n)
        blocks.append(grid)
    rhs = np.concatenate(blocks, axis=0)[pivot_rows]
    if field_of(rhs) == RATIONAL:
        sol = inverse @ rhs
    else:
        sol = np.array(inverse.tolist(), dtype=float) @ rhs
    params = {p: _zeros(r * n, c * n, Lc.field) for p, (r, c) in param_shapes(tag, k).items()}
    for u, (p, i, j) in enumerate(units):
        params[p][i * n:(i + 1) * n, j * n:(j + 1) * n] = sol[u].reshape(n, n)
    form = FamilyForm(tag, k, n, params)
    return form if build_family(P, form) == Lc else None


def all_certificates(L: BlockPencil, P: MatrixPolynomial, tags: Sequence[str] | None = None) -> Iterator[CongruenceCertificate]:
    """Every ``(c, tag)`` with ``c`` in lexicographic order whose congruence lies in a family."""
    k = P.k
    if k > 8:
        raise ValueError("exhaustive search is limited to k <= 8")
    tags = tuple(tags) if tags is not None else _parity_tags(k)
    for tag in tags:
        check_parity(tag, k)
    for c in itertools.permutations(range(1, k + 1)):
        Lc = congruence(L, c)
        for tag in tags:
            form = match_family(Lc, P, tag)
            if form is not None:
                yield CongruenceCertificate(BlockPermutation(c), form, True)


def brute_force_oracle(L: BlockPencil, P: MatrixPolynomial, tags: Sequence[str] | None = None) -> CongruenceCertificate | None:
    """First certificate in lexicographic order of ``c``, or ``None``."""
    return next(all_certificates(L, P, tags), None)


def nonsingularity_report(cert: CongruenceCertificate) -> dict[str, bool]:
    """Rank checks on the wing-scaling parameter and its block transpose."""
    name = {"O1": "B", "O2": "E", "E1": "D", "E2": "D"}[cert.tag]
    X = cert.form[name]
    n = cert.form.n
    if X.size == 0:
        return {name: True, name + "^B": True}
    return {
        name: ql.is_nonsingular(X),
        name + "^B": ql.is_nonsingular(block_transpose_matrix(X, n)),
    }
