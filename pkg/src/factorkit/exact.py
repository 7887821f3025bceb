"""Ground-truth exact counters.

Three engines:

* a degree-constrained backtracking enumerator over spanning subgraphs
  (the "dfs" method and the oracle for everything else),
* bitmask dynamic programming for degree 1 (perfect matchings) and
  degree 2 (cycle covers), reported as method "memoized", which lift the
  regular-graph ceiling from n <= 10 to n <= 16,
* a memoized matching-sequence engine that collapses the remaining graph
  to its canonical form between levels, making F(n,k) reachable for all
  k at n = 10 (and, slowly, n = 12).

All values are arbitrary-precision ints and deterministic for fixed
inputs: branch order is lowest-deficit-vertex first, candidate neighbours
ascending, and worker partitioning only ever re-groups an integer sum.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

from .asymptotics import DegreeSpec
from .canon import canonical_form
from .errors import InvalidInputError, RegimeRefusedError
from .graphs import LabelledGraph

__all__ = [
    "CountResult",
    "count_perfect_matchings",
    "count_regular_spanning_subgraphs",
    "count_regular_graphs_exact",
    "count_factorisations",
    "count_matching_sequences",
    "GENERAL_CEILING",
    "LOW_DEGREE_CEILING",
    "MATCHING_SEQ_CEILING",
]

GENERAL_CEILING = 10       # backtracking engines
LOW_DEGREE_CEILING = 16    # d <= 2 DP engines
MATCHING_SEQ_CEILING = 12  # memoized F(n,k)


@dataclass(frozen=True)
class CountResult:
    value: int
    method: str  # "dfs" | "memoized"
    nodes_visited: int
    wall_time: float  # seconds


def _timed(value: int, method: str, nodes: int, t0: float) -> CountResult:
    return CountResult(value, method, nodes, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# matchings

def _iter_matchings(rows: Sequence[int], n: int) -> Iterator[list]:
    """All perfect matchings as edge lists, lexicographic by construction:
    the lowest unmatched vertex is matched to its neighbours in ascending
    order."""
    full = (1 << n) - 1

    def rec(free: int, acc: list):
        if not free:
            yield list(acc)
            return
        u = (free & -free).bit_length() - 1
        cand = rows[u] & free & ~(1 << u)
        while cand:
            v = (cand & -cand).bit_length() - 1
            acc.append((u, v))
            yield from rec(free & ~(1 << u) & ~(1 << v), acc)
            acc.pop()
            cand &= cand - 1

    if n % 2 == 0:
        yield from rec(full, [])


def _count_matchings_dp(rows: Sequence[int], n: int) -> tuple:
    """Perfect-matching count by bitmask DP; returns (count, states)."""
    if n % 2:
        return 0, 0
    memo = {0: 1}

    def rec(free: int) -> int:
        hit = memo.get(free)
        if hit is not None:
            return hit
        u = (free & -free).bit_length() - 1
        cand = rows[u] & free
        total = 0
        while cand:
            v = (cand & -cand).bit_length() - 1
            total += rec(free & ~(1 << u) & ~(1 << v))
            cand &= cand - 1
        memo[free] = total
        return total

    result = rec((1 << n) - 1)
    return result, len(memo)


def count_perfect_matchings(host: LabelledGraph) -> int:
    return _count_matchings_dp(host.rows, host.n)[0]


# ---------------------------------------------------------------------------
# cycle covers (2-regular spanning subgraphs)

def _count_cycle_covers_dp(rows: Sequence[int], n: int) -> tuple:
    """Count spanning unions of vertex-disjoint cycles (length >= 3).

    paths[mask][last] counts simple paths inside mask from the lowest
    vertex of mask to last; closing those paths gives a per-mask cycle
    count, and a submask convolution assembles covers.  Returns
    (count, states).
    """
    if n == 0:
        return 1, 0
    size = 1 << n
    paths: list = [None] * size
    for v in range(n):
        cell = [0] * n
        cell[v] = 1
        paths[1 << v] = cell
    cycles: dict[int, int] = {}
    nodes = 0
    for mask in range(1, size):
        row_cell = paths[mask]
        if row_cell is None:
            continue
        anchor = (mask & -mask).bit_length() - 1
        anchor_adj = rows[anchor]
        popcount = mask.bit_count()
        for last in range(n):
            cnt = row_cell[last]
            if not cnt:
                continue
            nodes += 1
            if popcount >= 3 and anchor_adj >> last & 1:
                cycles[mask] = cycles.get(mask, 0) + cnt
            ext = rows[last] & ~mask
            ext &= ~((1 << (anchor + 1)) - 1)  # keep the anchor minimal
            while ext:
                w = (ext & -ext).bit_length() - 1
                nmask = mask | 1 << w
                cell = paths[nmask]
                if cell is None:
                    cell = [0] * n
                    paths[nmask] = cell
                cell[w] += cnt
                ext &= ext - 1
    cycles = {mask: cnt // 2 for mask, cnt in cycles.items()}  # two directions

    cover_memo: dict[int, int] = {0: 1}

    def covers(s: int) -> int:
        hit = cover_memo.get(s)
        if hit is not None:
            return hit
        anchor_bit = s & -s
        rest = s ^ anchor_bit
        total = 0
        # cycle submasks containing the anchor: anchor_bit | (sub ⊆ rest)
        sub = rest
        while True:
            cmask = anchor_bit | sub
            cnt = cycles.get(cmask)
            if cnt:
                total += cnt * covers(s ^ cmask)
            if sub == 0:
                break
            sub = (sub - 1) & rest
        cover_memo[s] = total
        return total

    result = covers(size - 1)
    return result, nodes + len(cover_memo)


# ---------------------------------------------------------------------------
# general degree-constrained backtracking

def _iter_regular_subgraphs(rows: Sequence[int], n: int, d: int) -> Iterator[list]:
    """All spanning d-regular subgraphs of the host, as adjacency rows.

    Completes the lowest-indexed vertex with unmet degree by choosing its
    remaining partners among higher-indexed vertices in ascending order;
    every leaf is reached exactly once.  Yields an internal buffer that is
    reused between leaves, so consume or copy before advancing.
    """
    from itertools import combinations

    deficit = [d] * n
    sub = [0] * n

    def rec(v: int):
        while v < n and deficit[v] == 0:
            v += 1
        if v == n:
            yield sub
            return
        need = deficit[v]
        cand = [w for w in range(v + 1, n) if deficit[w] > 0 and rows[v] >> w & 1]
        if len(cand) < need:
            return
        for chosen in combinations(cand, need):
            deficit[v] = 0
            bits = 0
            for w in chosen:
                deficit[w] -= 1
                bits |= 1 << w
                sub[w] |= 1 << v
            sub[v] |= bits
            yield from rec(v + 1)
            sub[v] &= ~bits
            for w in chosen:
                deficit[w] += 1
                sub[w] &= ~(1 << v)
            deficit[v] = need

    if (n * d) % 2 == 0:
        yield from rec(0)


def _count_regular_general(rows: Sequence[int], n: int, d: int) -> tuple:
    """Leaf count of the backtracking enumerator plus a node count
    (recursion entries), without materialising subgraphs."""
    from itertools import combinations

    deficit = [d] * n
    nodes = 0

    def rec(v: int) -> int:
        nonlocal nodes
        nodes += 1
        while v < n and deficit[v] == 0:
            v += 1
        if v == n:
            return 1
        need = deficit[v]
        cand = [w for w in range(v + 1, n) if deficit[w] > 0 and rows[v] >> w & 1]
        if len(cand) < need:
            return 0
        total = 0
        for chosen in combinations(cand, need):
            deficit[v] = 0
            for w in chosen:
                deficit[w] -= 1
            total += rec(v + 1)
            for w in chosen:
                deficit[w] += 1
            deficit[v] = need
        return total

    if (n * d) % 2:
        return 0, 0
    return rec(0), nodes


def count_regular_spanning_subgraphs(host: LabelledGraph, d: int, workers: int = 1) -> CountResult:
    """Spanning d-regular subgraphs of the host graph."""
    t0 = time.perf_counter()
    n = host.n
    min_deg = min(host.degrees()) if n else 0
    if not 0 <= d <= min_deg:
        raise InvalidInputError(f"degree {d} outside [0, min host degree = {min_deg}]")
    if (n * d) % 2:
        return _timed(0, "dfs", 0, t0)
    if d == 0:
        return _timed(1, "memoized", 0, t0)
    if d <= 2:
        if n > LOW_DEGREE_CEILING:
            raise RegimeRefusedError(
                f"n = {n} exceeds the d <= 2 ceiling of {LOW_DEGREE_CEILING}"
            )
        if d == 1:
            value, nodes = _count_matchings_dp(host.rows, n)
        else:
            value, nodes = _count_cycle_covers_dp(host.rows, n)
        return _timed(value, "memoized", nodes, t0)
    if n > GENERAL_CEILING:
        raise RegimeRefusedError(
            f"n = {n} exceeds the general-engine ceiling of {GENERAL_CEILING} for d = {d}"
        )
    if workers > 1:
        value, nodes = _count_regular_parallel(host.rows, n, d, workers)
    else:
        value, nodes = _count_regular_general(host.rows, n, d)
    return _timed(value, "dfs", nodes, t0)


def _count_regular_parallel(rows: Sequence[int], n: int, d: int, workers: int) -> tuple:
    """Partition the first branching level (vertex 0's partner sets)."""
    from itertools import combinations

    cand = [w for w in range(1, n) if rows[0] >> w & 1]
    if len(cand) < d:
        return 0, 1

    def branch(chosen):
        deficit = [d] * n
        deficit[0] = 0
        for w in chosen:
            deficit[w] -= 1
        nodes = 0

        def rec(v: int) -> int:
            nonlocal nodes
            nodes += 1
            while v < n and deficit[v] == 0:
                v += 1
            if v == n:
                return 1
            need = deficit[v]
            cands = [w for w in range(v + 1, n) if deficit[w] > 0 and rows[v] >> w & 1]
            if len(cands) < need:
                return 0
            total = 0
            for ch in combinations(cands, need):
                deficit[v] = 0
                for w in ch:
                    deficit[w] -= 1
                total += rec(v + 1)
                for w in ch:
                    deficit[w] += 1
                deficit[v] = need
            return total

        return rec(1), nodes

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(branch, combinations(cand, d)))
    return sum(v for v, _ in results), 1 + sum(nd for _, nd in results)


def count_regular_graphs_exact(n: int, d: int, workers: int = 1) -> CountResult:
    """R_d(n): d-regular graphs on n labelled vertices (complement duality
    reduces to min(d, n-1-d) before choosing an engine)."""
    if n < 1:
        raise InvalidInputError(f"need n >= 1, got {n}")
    if not 0 <= d <= n - 1:
        raise InvalidInputError(f"degree {d} outside [0, {n - 1}]")
    d_eff = min(d, n - 1 - d)
    if d_eff <= 2:
        if n > LOW_DEGREE_CEILING:
            raise RegimeRefusedError(f"n = {n} exceeds the ceiling {LOW_DEGREE_CEILING}")
    elif n > GENERAL_CEILING:
        raise RegimeRefusedError(
            f"n = {n} exceeds the general ceiling {GENERAL_CEILING} (needs min(d, n-1-d) <= 2)"
        )
    return count_regular_spanning_subgraphs(LabelledGraph.complete(n), d_eff, workers=workers)


# ---------------------------------------------------------------------------
# ordered factorisations

def count_factorisations(spec: DegreeSpec, workers: int = 1) -> CountResult:
    """Ordered tuples (F0..Fk) of edge-disjoint spanning regular factors of
    K_n with the prescribed degrees.  Factors F1..Fk are extracted in
    order; F0 is the forced remainder, checked regular."""
    t0 = time.perf_counter()
    if spec.n > GENERAL_CEILING:
        raise RegimeRefusedError(
            f"n = {spec.n} exceeds the factorisation ceiling of {GENERAL_CEILING}"
        )
    n = spec.n
    d0 = spec.degrees[0]
    rest = spec.degrees[1:]
    host = LabelledGraph.complete(n)

    def extract(rows: tuple, idx: int) -> tuple:
        if idx == len(rest):
            if any(r.bit_count() != d0 for r in rows):
                raise AssertionError("remainder factor is not regular")  # unreachable
            return 1, 1
        total = 0
        nodes = 1
        for sub in _iter_regular_subgraphs(rows, n, rest[idx]):
            v, nd = extract(tuple(r & ~s for r, s in zip(rows, sub)), idx + 1)
            total += v
            nodes += nd
        return total, nodes

    if rest and workers > 1:
        firsts = [tuple(sub) for sub in _iter_regular_subgraphs(host.rows, n, rest[0])]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(
                    lambda sub: extract(tuple(r & ~s for r, s in zip(host.rows, sub)), 1),
                    firsts,
                )
            )
        value = sum(v for v, _ in parts)
        nodes = 1 + sum(nd for _, nd in parts)
    else:
        value, nodes = extract(host.rows, 0)
    return _timed(value, "dfs", nodes, t0)


# ---------------------------------------------------------------------------
# matching sequences F(n, k)

class _ClassGraph:
    """Iso-class transition table for removing perfect matchings from K_n.

    transitions maps the canonical form of a remaining graph to a dict of
    successor canonical forms with multiplicities (how many matchings of
    the class representative lead to each successor class); F(n,k) is a
    weighted path count over this table.
    """

    def __init__(self, n: int):
        self.n = n
        root = LabelledGraph.complete(n)
        self.root_key = canonical_form(root)
        self.reps: dict[tuple, tuple] = {self.root_key: root.rows}
        self.transitions: dict[tuple, dict] = {}
        self.built_levels = 0
        self.frontier = [self.root_key]
        self.build_work = 0

    def ensure_levels(self, k: int) -> None:
        """Make transitions available for removing up to k matchings."""
        while self.built_levels < k and self.frontier:
            nxt: list = []
            for key in self.frontier:
                rows = self.reps[key]
                succ: dict[tuple, int] = {}
                for pm in _iter_matchings(rows, self.n):
                    new_rows = list(rows)
                    for u, v in pm:
                        new_rows[u] &= ~(1 << v)
                        new_rows[v] &= ~(1 << u)
                    g = LabelledGraph(self.n, new_rows, _trusted=True)
                    skey = canonical_form(g)
                    self.build_work += 1
                    if skey not in self.reps:
                        self.reps[skey] = g.rows
                        nxt.append(skey)
                    succ[skey] = succ.get(skey, 0) + 1
                self.transitions[key] = succ
            # dedupe frontier while preserving determinism
            seen = set()
            self.frontier = [key for key in nxt if not (key in seen or seen.add(key))]
            self.built_levels += 1

    def count_sequences(self, k: int) -> tuple:
        """F(n, k) plus the number of DP transition traversals."""
        self.ensure_levels(k)
        memo: dict[tuple, int] = {}
        work = 0

        def rec(key: tuple, j: int) -> int:
            nonlocal work
            if j == 0:
                return 1
            hit = memo.get((key, j))
            if hit is not None:
                return hit
            total = 0
            for skey, mult in self.transitions.get(key, {}).items():
                work += 1
                total += mult * rec(skey, j - 1)
            memo[(key, j)] = total
            return total

        value = rec(self.root_key, k)
        return value, work


_class_graphs: dict[int, _ClassGraph] = {}


def _matching_sequences_dfs(n: int, k: int) -> tuple:
    host = LabelledGraph.complete(n)
    nodes = 0

    def rec(rows: tuple, j: int) -> int:
        nonlocal nodes
        nodes += 1
        if j == 0:
            return 1
        total = 0
        for pm in _iter_matchings(rows, n):
            new_rows = list(rows)
            for u, v in pm:
                new_rows[u] &= ~(1 << v)
                new_rows[v] &= ~(1 << u)
            total += rec(tuple(new_rows), j - 1)
        return total

    return rec(host.rows, k), nodes


def count_matching_sequences(n: int, k: int, method: str = "auto", workers: int = 1) -> CountResult:
    """F(n, k): sequences of k pairwise disjoint perfect matchings of K_n."""
    t0 = time.perf_counter()
    if n % 2 or n < 2:
        raise InvalidInputError(f"F(n,k) needs even n >= 2, got n = {n}")
    if not 1 <= k <= n - 1:
        raise InvalidInputError(f"need 1 <= k <= n-1, got k = {k}")
    if method not in ("auto", "dfs", "memoized"):
        raise InvalidInputError(f"unknown method {method!r}")
    if method == "dfs":
        if n > GENERAL_CEILING:
            raise RegimeRefusedError(f"dfs matching sequences support n <= {GENERAL_CEILING}")
        value, nodes = _matching_sequences_dfs(n, k)
        return _timed(value, "dfs", nodes, t0)
    if n > MATCHING_SEQ_CEILING:
        raise RegimeRefusedError(f"matching sequences support n <= {MATCHING_SEQ_CEILING}")
    cg = _class_graphs.get(n)
    if cg is None:
        cg = _class_graphs[n] = _ClassGraph(n)
    value, work = cg.count_sequences(k)
    return _timed(value, "memoized", work, t0)
