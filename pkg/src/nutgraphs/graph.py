"""Simple undirected graphs stored as per-vertex bit sets, plus the graph6 codec."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

MAX_ORDER = 512
GRAPH6_HEADER = ">>graph6<<"


class Graph6Error(ValueError):
    """Malformed graph6 record; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


class EdgeRef(NamedTuple):
    u: int
    v: int

    @classmethod
    def of(cls, a: int, b: int) -> "EdgeRef":
        return cls(a, b) if a < b else cls(b, a)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``rows[v]`` is an int whose bit ``u`` is set iff ``u`` and ``v`` are adjacent.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_ORDER:
            raise ValueError(f"order {self.n} outside 0..{MAX_ORDER}")
        if len(self.rows) != self.n:
            raise ValueError("need exactly one adjacency row per vertex")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row & ~full:
                raise ValueError(f"row {v} references a vertex >= {self.n}")
            if row >> v & 1:
                raise ValueError(f"loop at vertex {v}")
            r = row
            while r:
                low = r & -r
                u = low.bit_length() - 1
                if not self.rows[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")
                r ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for order {n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return _bits(self.rows[v])

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def edges(self) -> Iterator[EdgeRef]:
        for u, row in enumerate(self.rows):
            for v in _bits(row >> (u + 1)):
                yield EdgeRef(u, u + 1 + v)

    @property
    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def adjacency_matrix(self) -> list[list[int]]:
        return [[(row >> j) & 1 for j in range(self.n)] for row in self.rows]

    def relabel(self, perm: list[int]) -> "Graph":
        """Graph in which old vertex ``v`` becomes ``perm[v]``."""
        rows = [0] * self.n
        for v, row in enumerate(self.rows):
            mask = 0
            for u in _bits(row):
                mask |= 1 << perm[u]
            rows[perm[v]] = mask
        return Graph(self.n, tuple(rows))

    def __str__(self):
        return write_graph6(self)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# -- graph6 -----------------------------------------------------------------


def parse_graph6(line: str | bytes) -> Graph:
    if isinstance(line, str):
        try:
            data = line.encode("ascii")
        except UnicodeEncodeError as exc:
            raise Graph6Error("non-ASCII character", exc.start) from None
    else:
        data = bytes(line)
    if data.endswith(b"\n"):
        data = data[:-1]
        if data.endswith(b"\r"):
            data = data[:-1]
    start = 0
    if data.startswith(GRAPH6_HEADER.encode()):
        start = len(GRAPH6_HEADER)
    for i in range(start, len(data)):
        if not 63 <= data[i] <= 126:
            raise Graph6Error(f"byte 0x{data[i]:02x} outside the graph6 range 63..126", i)
    if start >= len(data):
        raise Graph6Error("missing length header", start)

    pos = start
    if data[pos] < 126:
        n = data[pos] - 63
        pos += 1
    else:
        if len(data) < pos + 4:
            raise Graph6Error("truncated length header", len(data))
        if data[pos + 1] == 126:
            raise Graph6Error("orders above 258047 are not supported", pos + 1)
        n = 0
        for b in data[pos + 1 : pos + 4]:
            n = (n << 6) | (b - 63)
        if n < 63:
            raise Graph6Error(f"long length header used for order {n}", pos)
        pos += 4
    if n > MAX_ORDER:
        raise Graph6Error(f"order {n} exceeds supported maximum {MAX_ORDER}", start)

    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[pos:]
    if len(body) < nbytes:
        raise Graph6Error(f"expected {nbytes} edge bytes, found {len(body)}", len(data))
    if len(body) > nbytes:
        raise Graph6Error("trailing garbage after edge data", pos + nbytes)

    bits = 0
    for b in body:
        bits = (bits << 6) | (b - 63)
    pad = 6 * nbytes - nbits
    if bits & ((1 << pad) - 1):
        raise Graph6Error("nonzero padding bits", len(data) - 1)
    bits >>= pad
    rows = [0] * n
    k = nbits
    for j in range(1, n):
        for i in range(j):
            k -= 1
            if bits >> k & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    return Graph(n, tuple(rows))


def write_graph6(g: Graph) -> str:
    n = g.n
    if n > 258047:
        raise ValueError(f"order {n} cannot be encoded in graph6")
    if n <= 62:
        out = [chr(63 + n)]
    else:
        out = ["~"] + [chr(63 + ((n >> s) & 63)) for s in (12, 6, 0)]
    val = 0
    nb = 0
    rows = g.rows
    for j in range(1, n):
        row = rows[j]
        for i in range(j):
            val = (val << 1) | (row >> i & 1)
            nb += 1
            if nb == 6:
                out.append(chr(63 + val))
                val = nb = 0
    if nb:
        out.append(chr(63 + (val << (6 - nb))))
    return "".join(out)


# -- structural queries -------------------------------------------------------


def max_degree(g: Graph) -> int:
    return max(g.degrees(), default=0)


def min_degree(g: Graph) -> int:
    return min(g.degrees(), default=0)


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in _bits(frontier):
            nxt |= g.rows[v]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << g.n) - 1


def is_bipartite(g: Graph) -> bool:
    color = [-1] * g.n
    for s in range(g.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in _bits(g.rows[v]):
                if color[u] < 0:
                    color[u] = 1 - color[v]
                    queue.append(u)
                elif color[u] == color[v]:
                    return False
    return True


def girth(g: Graph) -> int | float:
    """Length of a shortest cycle, ``math.inf`` for forests."""
    best = math.inf
    for s in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            if 2 * dist[v] + 1 >= best:
                break
            for u in _bits(g.rows[v]):
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    queue.append(u)
                elif parent[v] != u:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def delete_vertex(g: Graph, v: int) -> Graph:
    """Remove ``v``; vertices above ``v`` shift down by one."""
    if g.n < 2:
        raise ValueError("cannot delete a vertex from a graph of order < 2")
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} out of range for order {g.n}")
    low = (1 << v) - 1
    rows = []
    for u, row in enumerate(g.rows):
        if u != v:
            rows.append((row & low) | ((row >> (v + 1)) << v))
    return Graph(g.n - 1, tuple(rows))


def p4_expand(g: Graph, e: tuple[int, int]) -> Graph:
    """Replace edge ``u-v`` by the path ``u-w1-w2-w3-w4-v`` on four new vertices."""
    u, v = EdgeRef.of(*e)
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    n = g.n
    rows = list(g.rows) + [0, 0, 0, 0]
    rows[u] &= ~(1 << v)
    rows[v] &= ~(1 << u)
    path = [u, n, n + 1, n + 2, n + 3, v]
    for a, b in zip(path, path[1:]):
        rows[a] |= 1 << b
        rows[b] |= 1 << a
    return Graph(n + 4, tuple(rows))
