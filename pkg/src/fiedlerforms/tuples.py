"""Index tuples: the successor infix property, canonical string form, heads and index types.

Two indices commute when they differ by at least two.  Tuples related by swaps
of adjacent commuting indices are equivalent; every equivalence class of a
tuple with the successor infix property (SIP) contains exactly one tuple made
of ascending strings ``(a_s:b_s, ..., a_1:b_1)`` with ``b_s > ... > b_1``,
called its column standard form here.
"""

from __future__ import annotations

import enum
import re
from collections.abc import Iterable, Sequence

IndexTuple = tuple[int, ...]


class IndexType(enum.Enum):
    TYPE_I = "I"
    TYPE_II = "II"


def irange(a: int, b: int) -> IndexTuple:
    """The string ``(a:b)``: ascending ``a, ..., b``; empty when ``a > b``."""
    return tuple(range(a, b + 1))


def rev(t: Sequence[int]) -> IndexTuple:
    return tuple(reversed(t))


def shift(t: Sequence[int], a: int) -> IndexTuple:
    return tuple(x + a for x in t)


def parse_tuple(text: str) -> IndexTuple:
    """Parse ``"(5,6,3,4)"``, ``"(0:1,0)"``, ``"()"`` or ``"∅"``.

    A range ``a:b`` with ``a > b`` is read as descending, so ``(3:1)`` is
    ``(3, 2, 1)``.
    """
    body = text.strip()
    if body in ("∅", "", "()"):
        return ()
    if body[0] == "(" and body[-1] == ")":
        body = body[1:-1]
    out: list[int] = []
    for part in body.split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"(-?\d+)\s*:\s*(-?\d+)", part)
        if m:
            a, b = int(m.group(1)), int(m.group(2))
            out.extend(range(a, b + 1) if a <= b else range(a, b - 1, -1))
        elif re.fullmatch(r"-?\d+", part):
            out.append(int(part))
        else:
            raise ValueError(f"cannot parse tuple element {part!r}")
    return tuple(out)


def format_tuple(t: Sequence[int]) -> str:
    """Render with maximal ascending runs written as ``a:b``."""
    items: list[str] = []
    i = 0
    t = list(t)
    while i < len(t):
        j = i
        while j + 1 < len(t) and t[j + 1] == t[j] + 1:
            j += 1
        items.append(f"{t[i]}:{t[j]}" if j > i else str(t[i]))
        i = j + 1
    return "(" + ",".join(items) + ")"


def _sign_normalised(t: Sequence[int]) -> IndexTuple:
    """Shift an all-negative tuple into the nonnegative range; reject mixed signs."""
    t = tuple(t)
    if not t:
        return t
    neg = [x < 0 for x in t]
    if all(neg):
        return shift(t, -min(t))
    if any(neg):
        raise ValueError(f"tuple {t} mixes negative and nonnegative indices")
    return t


def satisfies_sip(t: Sequence[int]) -> bool:
    """True iff between any two equal indices ``i`` some index ``i + 1`` occurs."""
    t = _sign_normalised(t)
    last: dict[int, int] = {}
    for pos, x in enumerate(t):
        if x in last and (x + 1) not in t[last[x] + 1:pos]:
            return False
        last[x] = pos
    return True


def commute(i: int, j: int) -> bool:
    return abs(i - j) != 1 and i != j


def equivalent(t1: Sequence[int], t2: Sequence[int]) -> bool:
    """Commutation equivalence, decided by comparing projections onto non-commuting pairs."""
    t1, t2 = tuple(t1), tuple(t2)
    if sorted(t1) != sorted(t2):
        return False
    values = sorted(set(t1))
    for a in values:
        for b in (a, a + 1):
            p1 = [x for x in t1 if x in (a, b)]
            p2 = [x for x in t2 if x in (a, b)]
            if p1 != p2:
                return False
    return True


def _greedy_largest_first(t: IndexTuple) -> IndexTuple:
    """Linear extension of the dependency order of ``t`` picking the largest free index first."""
    preds = [
        {p for p in range(q) if abs(t[p] - t[q]) <= 1} for q in range(len(t))
    ]
    done: set[int] = set()
    out: list[int] = []
    while len(out) < len(t):
        free = [q for q in range(len(t)) if q not in done and preds[q] <= done]
        q = max(free, key=lambda q: t[q])
        done.add(q)
        out.append(t[q])
    return tuple(out)


def strings(t: Sequence[int]) -> list[tuple[int, int]]:
    """Split into maximal ascending runs ``(a, b)``."""
    runs: list[tuple[int, int]] = []
    for x in t:
        if runs and x == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], x)
        else:
            runs.append((x, x))
    return runs


def csf(t: Sequence[int]) -> IndexTuple:
    """Column standard form of a SIP tuple."""
    t = tuple(t)
    if not satisfies_sip(t):
        raise ValueError(f"tuple {t} does not satisfy the SIP")
    offset = min(t) if t and t[0] < 0 else 0
    base = shift(t, -offset)
    form = _greedy_largest_first(base)
    ends = [b for _, b in strings(form)]
    if any(x <= y for x, y in zip(ends, ends[1:])):
        raise AssertionError(f"canonical form of {t} came out as {form}")
    return shift(form, offset)


def heads(t: Sequence[int]) -> frozenset[int]:
    """Right ends of the strings of ``csf(t)``."""
    return frozenset(b for _, b in strings(csf(t)))


def head_count(t: Sequence[int]) -> int:
    return len(strings(csf(t)))


def index_type(t: Sequence[int], x: int, check: bool = True) -> IndexType:
    """Type I when appending ``x`` keeps the number of strings, Type II when it adds one.

    With ``check`` the answer is compared with the criterion ``x - 1 in heads(t)``.
    """
    t = tuple(t)
    if not satisfies_sip(t + (x,)):
        raise ValueError(f"({format_tuple(t)}, {x}) does not satisfy the SIP")
    kind = IndexType.TYPE_I if head_count(t + (x,)) == head_count(t) else IndexType.TYPE_II
    if check:
        by_heads = IndexType.TYPE_I if (x - 1) in heads(t) else IndexType.TYPE_II
        if by_heads != kind:
            raise AssertionError(f"index type of {x} after {t} is inconsistent")
    return kind


def updated_heads(hs: Iterable[int], x: int, kind: IndexType) -> frozenset[int]:
    """Heads after appending ``x`` of the given type to a tuple with heads ``hs``."""
    hs = set(hs)
    if kind is IndexType.TYPE_I:
        hs.discard(x - 1)
    hs.add(x)
    return frozenset(hs)


def admissible_tuple(h: int) -> IndexTuple:
    """``w_h = (h-1:h, h-3:h-2, ..., p+1:p+2, 0:p)`` with ``p = h mod 2``."""
    if h < 0:
        raise ValueError("h must be nonnegative")
    p = h % 2
    out: list[int] = []
    for top in range(h, p + 1, -2):
        out.extend(irange(top - 1, top))
    out.extend(irange(0, p))
    return tuple(out)


def symmetric_complement(h: int) -> IndexTuple:
    """``c_h``: ``(h-1, h-3, ..., 2, 0)`` for odd ``h``, ``(h-1, ..., 1)`` for even ``h > 0``."""
    if h < 0:
        raise ValueError("h must be nonnegative")
    return tuple(range(h - 1, -1, -2))


def extended_tuple(t_w: Sequence[int], k: int) -> IndexTuple:
    """``(t_w, w_{k-1}, c_{k-1}, rev(t_w))``."""
    t_w = tuple(t_w)
    return t_w + admissible_tuple(k - 1) + symmetric_complement(k - 1) + rev(t_w)


def sip_append_positions(t_w: Sequence[int], k: int) -> frozenset[int]:
    """Positions ``k - j`` (``0 <= j <= k-2``) for which appending ``j`` keeps the SIP.

    Computed by a direct SIP test and by ``j not in heads``; both must agree.
    """
    T = extended_tuple(t_w, k)
    if not satisfies_sip(T):
        raise ValueError(f"extended tuple {T} does not satisfy the SIP")
    hs = heads(T)
    direct = {j for j in range(k - 1) if satisfies_sip(T + (j,))}
    by_heads = {j for j in range(k - 1) if j not in hs}
    if direct != by_heads:
        raise AssertionError(f"append criteria disagree for {T}")
    return frozenset(k - j for j in direct)
