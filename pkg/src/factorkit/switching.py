"""Exact realisation of the forward/reverse switchings between overlap
levels, and brute-force level counts over all n! relabellings.

An overlay is a fixed graph D, a graph H, and a relabelling pi of H; it
sits in level set L(t) when the common edges of D and relabel(H, pi) are
pairwise non-adjacent (no shared 2-path) and exactly t in number.

A forward switching at an overlay in L(t) is a double transposition
(a e)(b f) with ab a common edge, ef a non-edge of D, all four vertices
distinct, whose application leaves the common-edge set equal to the old
set minus ab (hence lands in L(t-1)).  A reverse switching is the mirror:
ab an H-only edge, ef a D-only edge, and the new common set is the old
set plus ef, with no shared 2-path afterwards.  Requiring the exact set
transition (not merely the level count) makes forward and reverse moves
mutual inverses, so the double-counting identity
    sum over L(t) of #forward == sum over L(t-1) of #reverse
holds exactly, not just asymptotically.
"""
from __future__ import annotations

import math
from itertools import permutations
from typing import Iterator, NamedTuple, Optional

from .errors import InvalidInputError, RegimeRefusedError
from .graphs import LabelledGraph, Permutation, relabel

__all__ = [
    "threshold_M",
    "SwitchMove",
    "Overlay",
    "forward_switchings",
    "reverse_switchings",
    "exact_levels",
    "exact_L",
    "exact_T",
    "ratio_predicted",
    "t_over_l0_predicted",
    "double_counting_sums",
    "ENUMERATION_CEILING",
]

ENUMERATION_CEILING = 8  # full S_n sweeps stay below 8! = 40320


def threshold_M(n: int, d: int, h: int) -> int:
    """Overlap cutoff M = ceil(max(8dh, log n))."""
    if n < 2 or d < 1 or h < 1:
        raise InvalidInputError(f"need n >= 2 and d, h >= 1, got (n={n}, d={d}, h={h})")
    return math.ceil(max(8 * d * h, math.log(n)))


class SwitchMove(NamedTuple):
    """The double transposition (a e)(b f); a and b carry the edge being
    destroyed (forward) or the H-only edge being moved (reverse).  Lists
    returned by the move enumerators are normalized to a < b."""

    a: int
    e: int
    b: int
    f: int

    def validate(self) -> None:
        if len({self.a, self.e, self.b, self.f}) != 4:
            raise InvalidInputError(f"switch vertices must be distinct: {self}")

    def normalized(self) -> "SwitchMove":
        """Same permutation and roles with the (a,e) pair holding min(a,b)."""
        if self.a > self.b:
            return SwitchMove(self.b, self.f, self.a, self.e)
        return self

    def permutation(self, n: int) -> Permutation:
        image = list(range(n))
        image[self.a], image[self.e] = self.e, self.a
        image[self.b], image[self.f] = self.f, self.b
        return Permutation(image)


class Overlay:
    """D, H and a relabelling pi of H, with the common-edge set cached."""

    __slots__ = ("D", "H", "pi", "h_rows", "common", "t", "p2_free")

    def __init__(self, D: LabelledGraph, H: LabelledGraph, pi: Permutation):
        if D.n != H.n:
            raise InvalidInputError(f"graphs have different orders: {D.n} vs {H.n}")
        if pi.n != D.n:
            raise InvalidInputError("relabelling size mismatch")
        self.D = D
        self.H = H
        self.pi = pi
        hp = relabel(H, pi)
        self.h_rows = hp.rows
        rows = [D.row(v) & hp.row(v) for v in range(D.n)]
        self.common = frozenset(_rows_to_edges(rows, D.n))
        self.t = len(self.common)
        self.p2_free = all(r.bit_count() <= 1 for r in rows)

    @property
    def n(self) -> int:
        return self.D.n

    def in_level(self) -> Optional[int]:
        """The t with this overlay in L(t), or None if a 2-path is shared."""
        return self.t if self.p2_free else None

    def apply(self, move: SwitchMove) -> "Overlay":
        """New overlay with pi replaced by (a e)(b f) composed with pi."""
        move.validate()
        sigma = move.permutation(self.n)
        return Overlay(self.D, self.H, sigma.compose(self.pi))


def _rows_to_edges(rows, n) -> Iterator[tuple]:
    for u in range(n):
        r = rows[u] >> (u + 1) << (u + 1)
        while r:
            v = (r & -r).bit_length() - 1
            yield (u, v)
            r &= r - 1


def _apply_sigma_rows(h_rows, n, move: SwitchMove):
    """Rows of the relabelled-H graph after the double transposition."""
    image = list(range(n))
    image[move.a], image[move.e] = move.e, move.a
    image[move.b], image[move.f] = move.f, move.b
    rows = [0] * n
    for u in range(n):
        r = h_rows[u]
        acc = 0
        while r:
            v = (r & -r).bit_length() - 1
            acc |= 1 << image[v]
            r &= r - 1
        rows[image[u]] = acc
    return rows


def _common_of(d_rows, h_rows, n):
    rows = [d_rows[v] & h_rows[v] for v in range(n)]
    p2_free = all(r.bit_count() <= 1 for r in rows)
    return frozenset(_rows_to_edges(rows, n)), p2_free


def forward_switchings(o: Overlay) -> list:
    """All valid forward switchings out of an overlay in L(t), t >= 1."""
    if not o.p2_free:
        raise InvalidInputError("overlay is not in any level set (common 2-path)")
    if o.t == 0:
        return []
    n = o.n
    d_rows = o.D.rows
    non_d = [(e, f) for e in range(n) for f in range(e + 1, n) if not d_rows[e] >> f & 1]
    out = []
    for a, b in sorted(o.common):
        target = o.common - {(a, b)}
        for e, f in non_d:
            if e == a or e == b or f == a or f == b:
                continue
            for move in (SwitchMove(a, e, b, f), SwitchMove(a, f, b, e)):
                new_rows = _apply_sigma_rows(o.h_rows, n, move)
                common, p2_free = _common_of(d_rows, new_rows, n)
                if p2_free and common == target:
                    out.append(move)
    return out


def reverse_switchings(o: Overlay) -> list:
    """All valid reverse switchings out of an overlay in L(t-1); each lands
    in L(t) with the common set enlarged by exactly the D-only edge ef."""
    if not o.p2_free:
        raise InvalidInputError("overlay is not in any level set (common 2-path)")
    n = o.n
    d_rows = o.D.rows
    h_only = []
    d_only = []
    for u in range(n):
        ho = o.h_rows[u] & ~d_rows[u]
        do = d_rows[u] & ~o.h_rows[u]
        r = ho >> (u + 1) << (u + 1)
        while r:
            v = (r & -r).bit_length() - 1
            h_only.append((u, v))
            r &= r - 1
        r = do >> (u + 1) << (u + 1)
        while r:
            v = (r & -r).bit_length() - 1
            d_only.append((u, v))
            r &= r - 1
    out = []
    for a, b in h_only:
        for e, f in d_only:
            if e == a or e == b or f == a or f == b:
                continue
            target = o.common | {(e, f)}
            for move in (SwitchMove(a, e, b, f), SwitchMove(a, f, b, e)):
                new_rows = _apply_sigma_rows(o.h_rows, n, move)
                common, p2_free = _common_of(d_rows, new_rows, n)
                if p2_free and common == target:
                    out.append(move)
    return out


# ---------------------------------------------------------------------------
# exhaustive level counts over S_n

def _check_enumeration(n: int) -> None:
    if n > ENUMERATION_CEILING:
        raise RegimeRefusedError(
            f"exact level enumeration sweeps all n! relabellings; n = {n} exceeds {ENUMERATION_CEILING}"
        )


def iter_level_members(D: LabelledGraph, H: LabelledGraph) -> Iterator[tuple]:
    """Yields (pi_image, t) for p2-free relabellings, lexicographically;
    relabellings sharing a 2-path are skipped."""
    if D.n != H.n:
        raise InvalidInputError(f"graphs have different orders: {D.n} vs {H.n}")
    _check_enumeration(D.n)
    n = D.n
    d_rows = D.rows
    h_edges = list(H.edges())
    for pi in permutations(range(n)):
        count = 0
        ends = 0
        bad = False
        for u, v in h_edges:
            pu, pv = pi[u], pi[v]
            if d_rows[pu] >> pv & 1:
                count += 1
                mask = 1 << pu | 1 << pv
                if ends & mask:
                    bad = True
                    break
                ends |= mask
        if not bad:
            yield pi, count


def exact_levels(D: LabelledGraph, H: LabelledGraph) -> dict:
    """L(t) for every t with L(t) > 0, by full enumeration of S_n."""
    levels: dict[int, int] = {}
    for _, t in iter_level_members(D, H):
        levels[t] = levels.get(t, 0) + 1
    return levels


def exact_L(D: LabelledGraph, H: LabelledGraph, t: int) -> int:
    if t < 0:
        raise InvalidInputError(f"level must be nonnegative, got {t}")
    return exact_levels(D, H).get(t, 0)


def exact_T(D: LabelledGraph, H: LabelledGraph) -> int:
    """T = sum of L(t) for t < M, with M from the regular degrees of D, H."""
    d = D.regular_degree()
    h = H.regular_degree()
    if d is None or h is None:
        raise InvalidInputError("T is defined for regular D and H")
    M = threshold_M(D.n, d, h)
    levels = exact_levels(D, H)
    return sum(cnt for t, cnt in levels.items() if t < M)


def ratio_predicted(n: int, d: int, h: int, t: int) -> float:
    """Leading term of L(t)/L(t-1): (m_d-t+1)(m_h-t+1) / (t C(n,2)).
    Nonpositive values flag an out-of-regime t (t > m_d or t > m_h)."""
    if t < 1:
        raise InvalidInputError(f"ratio is defined for t >= 1, got {t}")
    m_d = n * d / 2.0
    m_h = n * h / 2.0
    return (m_d - t + 1) * (m_h - t + 1) / (t * n * (n - 1) / 2.0)


def t_over_l0_predicted(d: int, h: int) -> float:
    """Leading term of T/L(0): exp(dh/2)."""
    if d < 1 or h < 1:
        raise InvalidInputError(f"need d, h >= 1, got ({d}, {h})")
    return math.exp(0.5 * d * h)


def double_counting_sums(D: LabelledGraph, H: LabelledGraph) -> dict:
    """For each level t >= 1: (total forward moves out of L(t), total
    reverse moves out of L(t-1)); the two entries must be equal."""
    _check_enumeration(D.n)
    buckets: dict[int, list] = {}
    for pi, t in iter_level_members(D, H):
        buckets.setdefault(t, []).append(pi)
    max_t = max(buckets) if buckets else 0
    out = {}
    for t in range(1, max_t + 1):
        fwd = sum(
            len(forward_switchings(Overlay(D, H, Permutation(pi))))
            for pi in buckets.get(t, [])
        )
        rev = sum(
            len(reverse_switchings(Overlay(D, H, Permutation(pi))))
            for pi in buckets.get(t - 1, [])
        )
        out[t] = (fwd, rev)
    return out
