"""Canonical labelling for graphs on <= 16 vertices.

Individualisation-refinement search over ordered partitions, keeping the
lexicographically largest relabelled adjacency-row tuple.  Discovered
automorphisms prune the search two ways: candidates in the orbit of an
already-processed sibling are skipped, and when a leaf reproduces the best
form the implied automorphism unwinds the search to the deepest node whose
individualised path it fixes pointwise.  Cheap shapes (empty, complete,
degree <= 1, 2-regular, and dense complements of these) bypass the search.

Used as an optimisation by the memoized exact counters; never a
correctness dependency (the plain dfs counters are the oracle).
"""
from __future__ import annotations

from functools import lru_cache

from .errors import InvalidInputError
from .graphs import LabelledGraph, Permutation

__all__ = ["canonical_form", "canonical_labelling", "are_isomorphic"]

_MAX_N = 16
_LEAF_BUDGET = 200_000


def canonical_form(g: LabelledGraph) -> tuple:
    """Adjacency rows of the canonical relabelling; equal iff isomorphic."""
    if g.n > _MAX_N:
        raise InvalidInputError(f"canonical labelling supports n <= {_MAX_N}, got {g.n}")
    return _canon_rows(g.n, g.rows)


def canonical_labelling(g: LabelledGraph) -> Permutation:
    """A permutation p with relabel(g, p).rows == canonical_form(g)."""
    if g.n > _MAX_N:
        raise InvalidInputError(f"canonical labelling supports n <= {_MAX_N}, got {g.n}")
    _, pos = _canon_with_labelling(g.n, g.rows)
    return Permutation(pos)


def are_isomorphic(a: LabelledGraph, b: LabelledGraph) -> bool:
    if a.n != b.n:
        return False
    return canonical_form(a) == canonical_form(b)


@lru_cache(maxsize=100_000)
def _canon_rows(n: int, rows: tuple) -> tuple:
    return _canon_with_labelling(n, rows)[0]


def _canon_with_labelling(n: int, rows: tuple) -> tuple:
    if n == 0:
        return (), ()
    total = n * (n - 1) // 2
    m = sum(r.bit_count() for r in rows) // 2

    if 2 * m > total:
        full = (1 << n) - 1
        crows = tuple((full ^ rows[v]) & ~(1 << v) for v in range(n))
        cform, pos = _canon_with_labelling(n, crows)
        form = tuple((full ^ cform[v]) & ~(1 << v) for v in range(n))
        return form, pos

    if m == 0:
        return (0,) * n, tuple(range(n))

    degs = [r.bit_count() for r in rows]
    if max(degs) <= 1:
        return _matching_form(n, rows)
    if all(d == 2 for d in degs):
        return _two_regular_form(n, rows)

    search = _Search(n, rows)
    search.run()
    return tuple(search.best_form), tuple(search.best_pos)


def _matching_form(n: int, rows: tuple):
    """Canonical form for graphs of maximum degree 1: matched pairs first."""
    pos = [0] * n
    nxt = 0
    for u in range(n):
        r = rows[u]
        if r and (r & -r).bit_length() - 1 > u:
            v = (r & -r).bit_length() - 1
            pos[u], pos[v] = nxt, nxt + 1
            nxt += 2
    for u in range(n):
        if not rows[u]:
            pos[u] = nxt
            nxt += 1
    form = [0] * n
    for u in range(n):
        r = rows[u]
        while r:
            v = (r & -r).bit_length() - 1
            form[pos[u]] |= 1 << pos[v]
            r &= r - 1
    return tuple(form), tuple(pos)


def _two_regular_form(n: int, rows: tuple):
    """Canonical form for 2-regular graphs: cycles laid out consecutively
    in nondecreasing length order."""
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        prev, cur = start, (rows[start] & -rows[start]).bit_length() - 1
        while cur != start:
            cyc.append(cur)
            seen[cur] = True
            r = rows[cur] & ~(1 << prev)
            prev, cur = cur, (r & -r).bit_length() - 1
        cycles.append(cyc)
    cycles.sort(key=len)
    pos = [0] * n
    nxt = 0
    for cyc in cycles:
        for v in cyc:
            pos[v] = nxt
            nxt += 1
    form = [0] * n
    base = 0
    for cyc in cycles:
        L = len(cyc)
        for i in range(L):
            a, b = base + i, base + (i + 1) % L
            form[a] |= 1 << b
            form[b] |= 1 << a
        base += L
    return tuple(form), tuple(pos)


class _Search:
    def __init__(self, n: int, rows: tuple):
        self.n = n
        self.rows = rows
        self.best_form: list | None = None
        self.best_pos: list | None = None
        self.best_path: tuple = ()
        self.gens: list[tuple] = []
        self.leaves = 0

    def run(self) -> None:
        self._node(self._refine([tuple(range(self.n))]), ())
        assert self.best_form is not None

    # -- equitable refinement (fixpoint over splitter cells) ----------------

    def _refine(self, cells: list) -> list:
        rows = self.rows
        changed = True
        while changed:
            changed = False
            for s in list(cells):
                smask = 0
                for v in s:
                    smask |= 1 << v
                out = []
                for cell in cells:
                    if len(cell) == 1:
                        out.append(cell)
                        continue
                    groups: dict[int, list] = {}
                    for v in cell:
                        groups.setdefault((rows[v] & smask).bit_count(), []).append(v)
                    if len(groups) == 1:
                        out.append(cell)
                    else:
                        changed = True
                        for key in sorted(groups, reverse=True):
                            out.append(tuple(groups[key]))
                cells = out
                if changed:
                    break
        return cells

    # -- search -------------------------------------------------------------

    def _node(self, cells: list, path: tuple):
        """Explore one node; returns an automorphism to unwind with, or None."""
        if all(len(c) == 1 for c in cells):
            return self._leaf(cells, path)

        tgt = min((i for i, c in enumerate(cells) if len(c) > 1), key=lambda i: len(cells[i]))
        cand = cells[tgt]
        processed: list[int] = []
        for v in cand:
            if processed and self._in_processed_orbit(v, processed, path):
                continue
            processed.append(v)
            child = list(cells)
            child[tgt : tgt + 1] = [(v,), tuple(w for w in cand if w != v)]
            gamma = self._node(self._refine(child), path + (v,))
            if gamma is not None:
                if all(gamma[p] == p for p in path):
                    # gamma maps this candidate onto an earlier sibling;
                    # siblings left in its orbit will be skipped
                    continue
                return gamma
        return None

    def _leaf(self, cells: list, path: tuple):
        self.leaves += 1
        if self.leaves > _LEAF_BUDGET:
            raise RuntimeError("canonical labelling exceeded its search budget")
        n = self.n
        pos = [0] * n
        for i, cell in enumerate(cells):
            pos[cell[0]] = i
        form = [0] * n
        for u in range(n):
            r = self.rows[u]
            acc = 0
            while r:
                w = (r & -r).bit_length() - 1
                acc |= 1 << pos[w]
                r &= r - 1
            form[pos[u]] = acc
        if self.best_form is None or form > self.best_form:
            self.best_form = form
            self.best_pos = pos
            self.best_path = path
            return None
        if form == self.best_form:
            # gamma sends v to the vertex holding the same position in the
            # best labelling
            bp = self.best_pos
            inv_best = [0] * n
            for v in range(n):
                inv_best[bp[v]] = v
            gamma = tuple(inv_best[pos[v]] for v in range(n))
            if self._is_automorphism(gamma):
                self.gens.append(gamma)
                # unwinding the search with gamma is sound only when it maps
                # this leaf's individualisation path onto the best leaf's,
                # position by position; otherwise keep gamma for orbit
                # pruning but explore on
                if len(path) == len(self.best_path) and all(
                    gamma[p] == q for p, q in zip(path, self.best_path)
                ):
                    return gamma
        return None

    def _is_automorphism(self, gamma: tuple) -> bool:
        rows = self.rows
        for v in range(self.n):
            r = rows[v]
            acc = 0
            while r:
                w = (r & -r).bit_length() - 1
                acc |= 1 << gamma[w]
                r &= r - 1
            if acc != rows[gamma[v]]:
                return False
        return True

    def _in_processed_orbit(self, v: int, processed: list, path: tuple) -> bool:
        """Union-find over generators fixing the path pointwise."""
        gens = [g for g in self.gens if all(g[p] == p for p in path)]
        if not gens:
            return False
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in gens:
            for a in range(self.n):
                ra, rb = find(a), find(g[a])
                if ra != rb:
                    parent[ra] = rb
        rv = find(v)
        return any(find(u) == rv for u in processed)
