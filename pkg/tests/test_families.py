import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import block_transpose_by_loops

from fiedlerforms.blockpencil import (
    BlockPencil,
    is_block_symmetric,
    parse_block_expr,
    pencil_from_symbols,
)
from fiedlerforms.families import (
    TAGS,
    FamilyForm,
    as_condition,
    as_equiv_product_check,
    as_violations,
    build_family,
    check_parity,
    linearization_conditions,
    natural_partition,
    param_shapes,
    permute_columns,
    skeleton,
    tag_for,
)
from fiedlerforms.matpoly import random_polynomial
from fiedlerforms.suite import body_satisfying_as, distinct_coefficients

seeds = st.integers(0, 2**32 - 1)

O1_K7 = [
    ["λA7+A6", "0", "0", "0", "-I", "0", "0"],
    ["0", "λA5+A4", "0", "0", "λI", "-I", "0"],
    ["0", "0", "λA3+A2", "0", "0", "λI", "-I"],
    ["0", "0", "0", "λA1+A0", "0", "0", "λI"],
    ["-I", "λI", "0", "0", "0", "0", "0"],
    ["0", "-I", "λI", "0", "0", "0", "0"],
    ["0", "0", "-I", "λI", "0", "0", "0"],
]
O2_K7 = [
    ["-A7", "λA7", "0", "0", "0", "0", "0"],
    ["λA7", "λA6+A5", "0", "0", "0", "-I", "0"],
    ["0", "0", "λA4+A3", "0", "0", "λI", "-I"],
    ["0", "0", "0", "λA2+A1", "A0", "0", "λI"],
    ["0", "0", "0", "A0", "-λA0", "0", "0"],
    ["0", "-I", "λI", "0", "0", "0", "0"],
    ["0", "0", "-I", "λI", "0", "0", "0"],
]
O2_K7_COLUMNS_MOVED = [
    ["λA7", "0", "0", "0", "-A7", "0", "0"],
    ["λA6+A5", "0", "0", "0", "λA7", "-I", "0"],
    ["0", "λA4+A3", "0", "0", "0", "λI", "-I"],
    ["0", "0", "λA2+A1", "A0", "0", "0", "λI"],
    ["0", "0", "A0", "-λA0", "0", "0", "0"],
    ["-I", "λI", "0", "0", "0", "0", "0"],
    ["0", "-I", "λI", "0", "0", "0", "0"],
]
E1_K6 = [
    ["λA6+A5", "0", "0", "0", "-I", "0"],
    ["0", "λA4+A3", "0", "0", "λI", "-I"],
    ["0", "0", "λA2+A1", "A0", "0", "λI"],
    ["0", "0", "A0", "-λA0", "0", "0"],
    ["-I", "λI", "0", "0", "0", "0"],
    ["0", "-I", "λI", "0", "0", "0"],
]
E2_K6 = [
    ["-A6", "λA6", "0", "0", "0", "0"],
    ["λA6", "λA5+A4", "0", "0", "-I", "0"],
    ["0", "0", "λA3+A2", "0", "λI", "-I"],
    ["0", "0", "0", "λA1+A0", "0", "λI"],
    ["0", "-I", "λI", "0", "0", "0"],
    ["0", "0", "-I", "λI", "0", "0"],
]
E2_K6_COLUMNS_MOVED = [
    ["λA6", "0", "0", "-A6", "0", "0"],
    ["λA5+A4", "0", "0", "λA6", "-I", "0"],
    ["0", "λA3+A2", "0", "0", "λI", "-I"],
    ["0", "0", "λA1+A0", "0", "0", "λI"],
    ["-I", "λI", "0", "0", "0", "0"],
    ["0", "-I", "λI", "0", "0", "0"],
]


@pytest.mark.parametrize(
    "tag, k, grid, moved",
    [
        ("O1", 7, O1_K7, None),
        ("O2", 7, O2_K7, O2_K7_COLUMNS_MOVED),
        ("E1", 6, E1_K6, None),
        ("E2", 6, E2_K6, E2_K6_COLUMNS_MOVED),
    ],
)
@pytest.mark.parametrize("n", [1, 2])
def test_skeleton_displays(tag, k, grid, moved, n):
    P = distinct_coefficients(np.random.default_rng(k * 10 + n), n, k)
    S = skeleton(P, tag)
    assert S == pencil_from_symbols(grid, P)
    if moved is not None:
        cols, _, _ = natural_partition(tag, k)
        assert permute_columns(S, cols) == pencil_from_symbols(moved, P)


def o1_form(P, B, C):
    return FamilyForm("O1", P.k, P.n, {"B": constant_blocks(P, B), "C": constant_blocks(P, C)})


def constant_blocks(P, grid):
    """Assemble a constant block matrix from symbolic entries such as ``"-A1"``."""
    rows = [np.concatenate([parse_block_expr(e, P)[1] for e in row], axis=1) for row in grid]
    return np.concatenate(rows, axis=0)


def test_k3_o1_members():
    P = distinct_coefficients(np.random.default_rng(9), 2, 3)
    # the member with zero coupling and identity scaling
    tp_form = pencil_from_symbols([["λA3+A2", "0", "-I"], ["0", "λA1+A0", "λI"], ["-I", "λI", "0"]], P)
    assert skeleton(P, "O1") == tp_form
    # B = -A0 and C = [0; -A1]
    first_basis = pencil_from_symbols(
        [["λA3+A2", "A1", "A0"], ["A1", "-λA1+A0", "-λA0"], ["A0", "-λA0", "0"]], P
    )
    assert build_family(P, o1_form(P, [["-A0"]], [["0"], ["-A1"]])) == first_basis
    # B = A3 and C = [A2; 0]; the constant of the (2,2) block stays A0
    last_basis = pencil_from_symbols(
        [["λA3-A2", "λA2", "-A3"], ["λA2", "λA1+A0", "λA3"], ["-A3", "λA3", "0"]], P
    )
    assert build_family(P, o1_form(P, [["A3"]], [["A2"], ["0"]])) == last_basis


def random_form(rng, tag, k, n, bound=3):
    params = {}
    for name, (r, c) in param_shapes(tag, k).items():
        params[name] = rng.integers(-bound, bound + 1, size=(r * n, c * n)).astype(object)
    return FamilyForm(tag, k, n, params)


def congruence_factor(form):
    """The block upper-triangular factor whose congruence maps the skeleton onto the member."""
    n, tag = form.n, form.tag
    k, s = form.k, form.s
    wing = {"O1": s, "O2": s - 1, "E1": s, "E2": s}[tag]
    top = k - wing
    F = np.eye(k * n, dtype=int).astype(object)
    if tag == "O1":
        stacked = form["C"]
    elif tag == "O2":
        stacked = np.concatenate([form["B"], form["C"], form["D"]], axis=0)
    elif tag == "E1":
        stacked = np.concatenate([form["B"], form["C"]], axis=0)
    else:
        stacked = np.concatenate([form["C"], form["B"]], axis=0)
    scale = {"O1": "B", "O2": "E", "E1": "D", "E2": "D"}[tag]
    F[: top * n, top * n:] = stacked
    F[top * n:, top * n:] = form[scale]
    return F


def k_for(tag, draw):
    if tag == "O1":
        return draw(st.sampled_from([1, 3, 5, 7]))
    if tag == "O2":
        return draw(st.sampled_from([3, 5, 7]))
    return draw(st.sampled_from([2, 4, 6, 8]))


@given(seeds, st.sampled_from(TAGS), st.integers(1, 2), st.data())
def test_member_is_congruent_to_skeleton(seed, tag, n, data):
    k = k_for(tag, data.draw)
    rng = np.random.default_rng(seed)
    P = random_polynomial(rng, n, k)
    form = random_form(rng, tag, k, n)
    F = congruence_factor(form)
    S = skeleton(P, tag)
    Fb = block_transpose_by_loops(F, n)
    expected = BlockPencil(n, F @ S.lam @ Fb, F @ S.const @ Fb)
    assert build_family(P, form) == expected


@given(seeds, st.sampled_from(TAGS), st.integers(1, 2), st.data())
def test_members_are_block_symmetric(seed, tag, n, data):
    k = k_for(tag, data.draw)
    rng = np.random.default_rng(seed)
    L = build_family(random_polynomial(rng, n, k), random_form(rng, tag, k, n))
    assert is_block_symmetric(L)


@given(seeds, st.sampled_from(TAGS), st.data())
def test_symmetric_data_gives_symmetric_member(seed, tag, data):
    k = k_for(tag, data.draw)
    rng = np.random.default_rng(seed)
    P = random_polynomial(rng, 2, k, symmetric=True)
    form = random_form(rng, tag, k, 2)
    params = {}
    for name, X in form.params.items():
        Y = X.copy()
        for i in range(0, Y.shape[0], 2):
            for j in range(0, Y.shape[1], 2):
                blk = Y[i:i + 2, j:j + 2]
                Y[i:i + 2, j:j + 2] = np.triu(blk) + np.triu(blk, 1).T
        params[name] = Y
    L = build_family(P, FamilyForm(tag, k, 2, params))
    assert np.array_equal(L.lam, L.lam.T) and np.array_equal(L.const, L.const.T)


def test_parity_rules():
    with pytest.raises(ValueError):
        check_parity("O1", 4)
    with pytest.raises(ValueError):
        check_parity("E2", 5)
    with pytest.raises(ValueError):
        check_parity("X1", 5)
    assert [tag_for(7, h) for h in range(4)] == ["O1", "O2", "O1", "O2"]
    assert [tag_for(6, h) for h in range(4)] == ["E2", "E1", "E2", "E1"]


def test_form_rejects_wrong_parameters():
    with pytest.raises(ValueError):
        FamilyForm("O1", 5, 1, {"B": np.eye(2, dtype=int)})


def test_form_json_round_trip():
    form = random_form(np.random.default_rng(0), "O2", 7, 2)
    assert FamilyForm.from_json_dict(form.to_json_dict()) == form


def test_as_condition_worked_body():
    P = distinct_coefficients(np.random.default_rng(4), 2, 5)
    M = pencil_from_symbols([["λA5", "0", "0"], ["λA4", "0", "0"], ["λA3", "λA2", "λA1+A0"]], P)
    holds, _ = as_condition(M, P)
    assert holds and as_equiv_product_check(M, P)
    broken = pencil_from_symbols([["λA5", "0", "0"], ["λA4", "A1", "0"], ["λA3", "λA2", "λA1+A0"]], P)
    assert as_violations(broken, P) == [2]
    assert as_equiv_product_check(broken, P)


@given(seeds, st.integers(0, 3), st.integers(0, 3), st.integers(1, 2), st.booleans())
def test_as_condition_iff_sandwich(seed, p, q, n, perturb):
    rng = np.random.default_rng(seed)
    P = random_polynomial(rng, n, p + q + 1)
    M = body_satisfying_as(rng, p, q, n, P)
    assert as_condition(M, P)[0]
    if perturb:
        lam = M.lam.copy()
        lam[0, 0] += 1
        M = BlockPencil(n, lam, M.const)
    assert as_equiv_product_check(M, P)


def test_linearization_conditions():
    rng = np.random.default_rng(2)
    P = random_polynomial(rng, 1, 5, nonsingular=(0, 5))
    report = linearization_conditions(FamilyForm.skeleton_form("O2", 5, 1), P)
    assert report.holds and set(report.conditions) == {"A0", "A5", "E", "E^B"}
    zero = FamilyForm("E1", 4, 1, {"B": np.zeros((2, 1), dtype=int), "C": np.zeros((1, 1), dtype=int), "D": np.zeros((1, 1), dtype=int)})
    assert not linearization_conditions(zero, random_polynomial(rng, 1, 4, nonsingular=(0,))).holds
