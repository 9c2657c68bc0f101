import itertools

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from oracles import csf_by_search, equivalence_class, heads_by_search, sip_by_definition

from fiedlerforms.tuples import (
    IndexType,
    admissible_tuple,
    csf,
    equivalent,
    extended_tuple,
    format_tuple,
    head_count,
    heads,
    index_type,
    parse_tuple,
    satisfies_sip,
    sip_append_positions,
    symmetric_complement,
    updated_heads,
)

small_tuples = st.lists(st.integers(0, 5), max_size=7).map(tuple)


@pytest.mark.parametrize(
    "h, w, c",
    [
        (0, (0,), ()),
        (1, (0, 1), (0,)),
        (2, (1, 2, 0), (1,)),
        (3, (2, 3, 0, 1), (2, 0)),
        (4, (3, 4, 1, 2, 0), (3, 1)),
        (5, (4, 5, 2, 3, 0, 1), (4, 2, 0)),
    ],
)
def test_admissible_tuple_and_complement(h, w, c):
    assert admissible_tuple(h) == w
    assert symmetric_complement(h) == c
    assert sorted(w) == list(range(h + 1))


# frozen from the breadth-first search over commutation classes
@pytest.mark.parametrize(
    "t, form, hs",
    [
        ((0, 1, 0), (0, 1, 0), {0, 1}),
        ((2, 0, 1), (2, 0, 1), {1, 2}),
        ((1, 0, 2, 1), (1, 2, 0, 1), {1, 2}),
        ((0, 2, 1, 3, 2), (2, 3, 0, 1, 2), {2, 3}),
        ((5, 6, 3, 4, 1, 2, 0, 5, 3, 1), (5, 6, 3, 4, 5, 1, 2, 3, 0, 1), {1, 3, 5, 6}),
    ],
)
def test_csf_frozen(t, form, hs):
    assert csf(t) == form
    assert heads(t) == hs


def test_csf_negative_tuple_shifts_back():
    assert csf((-3, -1, -2)) == (-1, -3, -2)


def test_csf_rejects_non_sip():
    with pytest.raises(ValueError):
        csf((0, 0))


def test_parse_and_format():
    assert parse_tuple("(0:2,5,1)") == (0, 1, 2, 5, 1)
    assert parse_tuple("()") == ()
    assert format_tuple((3, 4, 5, 1, 0, 1)) == "(3:5,1,0:1)"
    assert format_tuple(csf((0, 1, 0))) == "(0:1,0)"
    with pytest.raises(ValueError):
        parse_tuple("(a)")


def test_sip_examples():
    assert satisfies_sip((0, 1, 0))
    assert not satisfies_sip((0, 2, 0))
    assert satisfies_sip((-2, -1, -2))


@pytest.mark.parametrize("h", range(13))
def test_admissible_with_complement_satisfies_sip(h):
    assert satisfies_sip(admissible_tuple(h) + symmetric_complement(h))


def test_append_positions_frozen():
    # frozen from direct SIP checks of (t_w, w_{k-1}, c_{k-1}, rev t_w, j)
    assert sip_append_positions((), 3) == {3}
    assert sip_append_positions((), 5) == {3, 5}
    assert sip_append_positions((0,), 5) == {3}
    assert sip_append_positions((2,), 5) == {4, 5}


@given(small_tuples)
def test_sip_matches_definition(t):
    assert satisfies_sip(t) == sip_by_definition(t)


@given(small_tuples)
def test_csf_matches_search(t):
    assume(satisfies_sip(t))
    assert csf(t) == csf_by_search(t)
    assert heads(t) == heads_by_search(t)


@given(small_tuples)
def test_csf_is_idempotent_and_equivalent(t):
    assume(satisfies_sip(t))
    form = csf(t)
    assert csf(form) == form
    assert equivalent(t, form)


@given(small_tuples, st.data())
def test_equivalence_matches_search(t, data):
    cls = equivalence_class(t)
    other = data.draw(st.permutations(t).map(tuple))
    assert equivalent(t, other) == (other in cls)


@given(small_tuples, st.integers(0, 5))
def test_index_type_and_head_update(t, x):
    assume(satisfies_sip(t) and satisfies_sip(t + (x,)))
    kind = index_type(t, x)
    grow = head_count(t + (x,)) - head_count(t)
    assert grow == (0 if kind is IndexType.TYPE_I else 1)
    assert updated_heads(heads(t), x, kind) == heads(t + (x,))


def test_index_type_exhaustive_small():
    for length in range(5):
        for t in itertools.product(range(4), repeat=length):
            if not satisfies_sip(t):
                continue
            for x in range(4):
                if satisfies_sip(t + (x,)):
                    index_type(t, x)


@given(st.integers(2, 9), st.data())
def test_append_positions_by_direct_sip(k, data):
    t_w = data.draw(st.lists(st.integers(0, k - 2), max_size=3).map(tuple))
    assume(satisfies_sip(extended_tuple(t_w, k)))
    T = extended_tuple(t_w, k)
    direct = {k - j for j in range(k - 1) if sip_by_definition(T + (j,))}
    assert sip_append_positions(t_w, k) == direct
