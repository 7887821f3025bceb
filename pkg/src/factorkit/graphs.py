"""Labelled simple graphs on vertices 0..n-1 with packed-bit adjacency rows.

Rows are Python ints used as bitsets, so the row-wise AND that underlies
common-edge detection is a single big-int operation.  Graphs are immutable
after construction and safe to share across threads.  Edges are always the
canonical ordered pair (min, max) and edge iteration is lexicographic.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence

from .errors import InvalidInputError

__all__ = [
    "MAX_VERTICES",
    "LabelledGraph",
    "Permutation",
    "complement",
    "relabel",
    "common_edges",
    "count_common_edges",
    "common_rows",
    "has_common_p2",
    "merge_disjoint",
    "circulant_regular",
    "to_graph6",
    "from_graph6",
    "to_edge_list",
    "from_edge_list",
    "read_graph_file",
    "write_graph_file",
]

# hard cap on the vertex count (a multiple of 64); the exact engines stay
# below 16 and the samplers below 10^4
MAX_VERTICES = 16384


class LabelledGraph:
    """Immutable simple undirected graph: zero diagonal, symmetric rows."""

    __slots__ = ("n", "_rows", "_m")

    def __init__(self, n: int, rows: Sequence[int], _trusted: bool = False):
        if not 0 <= n <= MAX_VERTICES:
            raise InvalidInputError(f"vertex count {n} outside [0, {MAX_VERTICES}]")
        rows = tuple(rows)
        if len(rows) != n:
            raise InvalidInputError(f"expected {n} adjacency rows, got {len(rows)}")
        if not _trusted:
            for v, row in enumerate(rows):
                if row >> n:
                    raise InvalidInputError(f"row {v} has bits beyond vertex {n - 1}")
                if row >> v & 1:
                    raise InvalidInputError(f"self-loop at vertex {v}")
            for v, row in enumerate(rows):
                r = row
                while r:
                    w = (r & -r).bit_length() - 1
                    if not rows[w] >> v & 1:
                        raise InvalidInputError(f"asymmetric adjacency between {v} and {w}")
                    r &= r - 1
        self.n = n
        self._rows = rows
        self._m = sum(r.bit_count() for r in rows) // 2

    # -- constructors ------------------------------------------------------

    @staticmethod
    def empty(n: int) -> "LabelledGraph":
        return LabelledGraph(n, (0,) * n, _trusted=True)

    @staticmethod
    def complete(n: int) -> "LabelledGraph":
        full = (1 << n) - 1
        return LabelledGraph(n, tuple(full ^ (1 << v) for v in range(n)), _trusted=True)

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "LabelledGraph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInputError(f"edge ({u},{v}) outside vertex range 0..{n - 1}")
            if u == v:
                raise InvalidInputError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return LabelledGraph(n, rows, _trusted=True)

    @staticmethod
    def perfect_matching(n: int) -> "LabelledGraph":
        """The canonical matching {0-1, 2-3, ...}; n must be even."""
        if n % 2:
            raise InvalidInputError(f"no perfect matching on odd n = {n}")
        return LabelledGraph.from_edges(n, [(2 * i, 2 * i + 1) for i in range(n // 2)])

    # -- basic queries ------------------------------------------------------

    def row(self, v: int) -> int:
        return self._rows[v]

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    @property
    def edge_count(self) -> int:
        return self._m

    def degree(self, v: int) -> int:
        return self._rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self._rows]

    def regular_degree(self) -> Optional[int]:
        """The common degree, or None if the graph is not regular."""
        if self.n == 0:
            return 0
        d = self._rows[0].bit_count()
        return d if all(r.bit_count() == d for r in self._rows) else None

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._rows[u] >> v & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            r = self._rows[u] >> (u + 1) << (u + 1)
            while r:
                v = (r & -r).bit_length() - 1
                yield (u, v)
                r &= r - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, LabelledGraph) and self.n == other.n and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.n, self._rows))

    def __repr__(self) -> str:
        return f"LabelledGraph(n={self.n}, m={self._m})"


class Permutation:
    """A bijection on 0..n-1, stored as the image array."""

    __slots__ = ("image",)

    def __init__(self, image: Sequence[int]):
        image = tuple(image)
        n = len(image)
        seen = [False] * n
        for x in image:
            if not isinstance(x, int) or not 0 <= x < n or seen[x]:
                raise InvalidInputError(f"not a permutation of 0..{n - 1}: {image}")
            seen[x] = True
        self.image = image

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(range(n))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, v: int) -> int:
        return self.image[v]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(v) == self(other(v))."""
        if self.n != other.n:
            raise InvalidInputError("size mismatch composing permutations")
        return Permutation(tuple(self.image[other.image[v]] for v in range(self.n)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for v, w in enumerate(self.image):
            inv[w] = v
        return Permutation(inv)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.image == other.image

    def __hash__(self) -> int:
        return hash(self.image)

    def __repr__(self) -> str:
        return f"Permutation({list(self.image)})"


# ---------------------------------------------------------------------------
# operations

def _check_same_n(a: LabelledGraph, b: LabelledGraph) -> None:
    if a.n != b.n:
        raise InvalidInputError(f"graphs have different orders: {a.n} vs {b.n}")


def complement(g: LabelledGraph) -> LabelledGraph:
    full = (1 << g.n) - 1
    rows = tuple((full ^ g.row(v)) & ~(1 << v) for v in range(g.n))
    return LabelledGraph(g.n, rows, _trusted=True)


def relabel(g: LabelledGraph, p: Permutation) -> LabelledGraph:
    """Image of g under p: edge {u,v} becomes {p(u), p(v)}."""
    if p.n != g.n:
        raise InvalidInputError(f"permutation on {p.n} vertices applied to graph on {g.n}")
    img = p.image
    rows = [0] * g.n
    for u in range(g.n):
        r = g.row(u)
        pu = img[u]
        acc = 0
        while r:
            v = (r & -r).bit_length() - 1
            acc |= 1 << img[v]
            r &= r - 1
        rows[pu] = acc
    return LabelledGraph(g.n, rows, _trusted=True)


def common_rows(a: LabelledGraph, b: LabelledGraph) -> tuple[int, ...]:
    _check_same_n(a, b)
    return tuple(a.row(v) & b.row(v) for v in range(a.n))


def common_edges(a: LabelledGraph, b: LabelledGraph) -> list[tuple[int, int]]:
    """Edges present in both graphs, in lexicographic order."""
    rows = common_rows(a, b)
    out = []
    for u in range(a.n):
        r = rows[u] >> (u + 1) << (u + 1)
        while r:
            v = (r & -r).bit_length() - 1
            out.append((u, v))
            r &= r - 1
    return out


def count_common_edges(a: LabelledGraph, b: LabelledGraph) -> int:
    _check_same_n(a, b)
    return sum((a.row(v) & b.row(v)).bit_count() for v in range(a.n)) // 2


def has_common_p2(a: LabelledGraph, b: LabelledGraph) -> bool:
    """True iff some vertex meets >= 2 common edges (a path of length 2
    shared by both graphs)."""
    _check_same_n(a, b)
    return any((a.row(v) & b.row(v)).bit_count() >= 2 for v in range(a.n))


def merge_disjoint(a: LabelledGraph, b: LabelledGraph) -> LabelledGraph:
    """Union of two edge-disjoint graphs; refuses on a shared edge."""
    _check_same_n(a, b)
    for v in range(a.n):
        clash = a.row(v) & b.row(v)
        if clash:
            w = (clash & -clash).bit_length() - 1
            raise InvalidInputError(f"graphs share edge ({min(v, w)},{max(v, w)})")
    rows = tuple(a.row(v) | b.row(v) for v in range(a.n))
    return LabelledGraph(a.n, rows, _trusted=True)


def circulant_regular(n: int, d: int) -> LabelledGraph:
    """Deterministic d-regular graph: circulant with offsets 1..d//2,
    plus the antipodal offset n/2 when d is odd (needs n even)."""
    if not 0 <= d < n:
        raise InvalidInputError(f"degree {d} out of range for n = {n}")
    if n * d % 2:
        raise InvalidInputError(f"no {d}-regular graph on {n} vertices (parity)")
    if 2 * (d // 2) >= n and d > 0:
        raise InvalidInputError(f"circulant offsets exceed n/2 for (n={n}, d={d})")
    edges = []
    for off in range(1, d // 2 + 1):
        for v in range(n):
            edges.append((v, (v + off) % n))
    if d % 2:
        edges.extend((v, v + n // 2) for v in range(n // 2))
    return LabelledGraph.from_edges(n, edges)


# ---------------------------------------------------------------------------
# graph6 format (bit-exact; see README for the byte layout)

def _g6_size_bytes(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, (n >> 12) + 63, (n >> 6 & 63) + 63, (n & 63) + 63])
    raise InvalidInputError(f"graph6 size {n} beyond supported range")


def to_graph6(g: LabelledGraph) -> str:
    bits = []
    for v in range(1, g.n):
        col = g.row(v)
        for u in range(v):
            bits.append(col >> u & 1)
    data = bytearray(_g6_size_bytes(g.n))
    for i in range(0, len(bits), 6):
        chunk = bits[i : i + 6]
        chunk += [0] * (6 - len(chunk))
        val = 0
        for b in chunk:
            val = val << 1 | b
        data.append(val + 63)
    return data.decode("ascii")


def from_graph6(text: str) -> LabelledGraph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    raw = s.encode("ascii")
    if not raw:
        raise InvalidInputError("empty graph6 string")
    if raw[0] == 126:
        if len(raw) < 4:
            raise InvalidInputError("truncated graph6 header")
        if raw[1] == 126:
            raise InvalidInputError("graph6 orders beyond 258047 are not supported")
        n = (raw[1] - 63 << 12) | (raw[2] - 63 << 6) | (raw[3] - 63)
        body = raw[4:]
    else:
        n = raw[0] - 63
        body = raw[1:]
    if n < 0:
        raise InvalidInputError("bad graph6 header byte")
    need = (n * (n - 1) // 2 + 5) // 6
    if len(body) != need:
        raise InvalidInputError(f"graph6 body has {len(body)} bytes, expected {need}")
    bits = []
    for byte in body:
        x = byte - 63
        if not 0 <= x < 64:
            raise InvalidInputError(f"invalid graph6 byte {byte}")
        bits.extend((x >> shift) & 1 for shift in range(5, -1, -1))
    rows = [0] * n
    idx = 0
    for v in range(1, n):
        for u in range(v):
            if bits[idx]:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            idx += 1
    return LabelledGraph(n, rows, _trusted=True)


# ---------------------------------------------------------------------------
# plain edge-list format: "# n=<N>" header, then one "u v" pair per line

def to_edge_list(g: LabelledGraph) -> str:
    lines = [f"# n={g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> LabelledGraph:
    n = None
    edges = []
    maxv = -1
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            body = s[1:].strip()
            if body.startswith("n="):
                n = int(body[2:])
            continue
        parts = s.split()
        if len(parts) != 2:
            raise InvalidInputError(f"edge list line {lineno} is not 'u v': {line!r}")
        u, v = int(parts[0]), int(parts[1])
        edges.append((u, v))
        maxv = max(maxv, u, v)
    if n is None:
        n = maxv + 1
    return LabelledGraph.from_edges(n, edges)


def read_graph_file(path: str) -> LabelledGraph:
    """Read graph6 or edge-list, decided by extension then content."""
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    if path.endswith((".g6", ".graph6")):
        return from_graph6(text)
    stripped = text.lstrip()
    first = stripped.splitlines()[0] if stripped else ""
    if first.startswith("#") or (len(first.split()) == 2 and all(p.isdigit() for p in first.split())):
        return from_edge_list(text)
    return from_graph6(text)


def write_graph_file(g: LabelledGraph, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        if path.endswith((".g6", ".graph6")):
            fh.write(to_graph6(g) + "\n")
        else:
            fh.write(to_edge_list(g))
