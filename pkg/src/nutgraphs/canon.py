"""Canonical labelling by partition refinement and individualisation.

The canonical form is the relabelling whose upper-triangle adjacency bit
string (graph6 order) is lexicographically largest over all leaves of the
search tree. Automorphisms found at equal leaves prune the tree: siblings in
the same orbit of the path stabiliser are skipped, and a leaf equivalent to a
stored leaf abandons the rest of its subtree.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence

from .graph import Graph, write_graph6

Labeller = Callable[[int, Sequence[int]], tuple[list[int], list[int]]]


@lru_cache(maxsize=1 << 18)
def bits(mask: int) -> tuple[int, ...]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def relabelled_rows(rows: Sequence[int], lab: Sequence[int]) -> tuple[int, ...]:
    """Rows of the graph with vertex lab[i] renamed i; equal for isomorphic
    graphs when ``lab`` is a canonical labelling."""
    pos = [0] * len(lab)
    for i, v in enumerate(lab):
        pos[v] = i
    out = [0] * len(lab)
    for v, row in enumerate(rows):
        m = 0
        for u in bits(row):
            m |= 1 << pos[u]
        out[pos[v]] = m
    return tuple(out)


def _refine(rows: Sequence[int], cells: list[int], queue: list[int]) -> list[int]:
    """Equitable refinement of an ordered partition (cells are vertex bit masks)."""
    cells = list(cells)
    qi = 0
    while qi < len(queue):
        splitter = queue[qi]
        qi += 1
        out = []
        for cell in cells:
            if cell & (cell - 1) == 0:
                out.append(cell)
                continue
            groups: dict[int, int] = {}
            c = cell
            while c:
                low = c & -c
                v = low.bit_length() - 1
                k = (rows[v] & splitter).bit_count()
                groups[k] = groups.get(k, 0) | low
                c ^= low
            if len(groups) == 1:
                out.append(cell)
            else:
                frags = [groups[k] for k in sorted(groups)]
                out.extend(frags)
                queue.extend(frags)
        cells = out
        if len(cells) == len(rows):
            break
    return cells


def labelled_code(rows: Sequence[int], lab: Sequence[int]) -> int:
    """Upper-triangle bit string of the graph relabelled so that lab[i] -> i."""
    n = len(lab)
    code = 0
    for j in range(1, n):
        rj = rows[lab[j]]
        for i in range(j):
            code = (code << 1) | (rj >> lab[i] & 1)
    return code


def _orbits(n: int, gens: Sequence[Sequence[int]], fixed: Sequence[int] = ()) -> list[int]:
    """Orbit representative (smallest member) of each vertex under the
    generators that fix every vertex in ``fixed``."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        if any(g[v] != v for v in fixed):
            continue
        for v in range(n):
            a, b = find(v), find(g[v])
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    return [find(v) for v in range(n)]


def canonical_labeling(n: int, rows: Sequence[int]) -> tuple[list[int], list[int]]:
    """Return (lab, orbits): lab[i] is the vertex at canonical position i and
    orbits[v] the smallest vertex in v's automorphism orbit."""
    if n == 0:
        return [], []
    full = (1 << n) - 1
    root = _refine(rows, [full], [full])

    gens: list[list[int]] = []
    first: list = []  # [code, lab, path]
    best: list = []

    def leaf(cells, path):
        lab = [c.bit_length() - 1 for c in cells]
        code = labelled_code(rows, lab)
        if not first:
            first[:] = [code, lab, path]
            best[:] = [code, lab, path]
            return len(path)
        for ref in (first, best):
            if code == ref[0]:
                pos = [0] * n
                for i, v in enumerate(lab):
                    pos[v] = i
                gamma = [ref[1][pos[v]] for v in range(n)]
                if any(gamma[v] != v for v in range(n)):
                    gens.append(gamma)
                common = 0
                while common < len(path) and path[common] == ref[2][common]:
                    common += 1
                return common
        if code > best[0]:
            best[:] = [code, lab, path]
        return len(path)

    def search(cells, path):
        if len(cells) == n:
            return leaf(cells, path)
        depth = len(path)
        ti = next(i for i, c in enumerate(cells) if c & (c - 1))
        target = cells[ti]
        tried: list[int] = []
        for v in bits(target):
            if tried:
                orb = _orbits(n, gens, path)
                if any(orb[v] == orb[w] for w in tried):
                    continue
            tried.append(v)
            single = 1 << v
            child = cells[:ti] + [single, target ^ single] + cells[ti + 1 :]
            back = search(_refine(rows, child, [single]), path + [v])
            if back < depth:
                return back
        return depth

    search(root, [])
    return best[1], _orbits(n, gens)


def canonical_form(g: Graph) -> Graph:
    lab, _ = canonical_labeling(g.n, g.rows)
    pos = [0] * g.n
    for i, v in enumerate(lab):
        pos[v] = i
    return g.relabel(pos)


def canonical_code(g: Graph) -> bytes:
    """Byte string equal for two graphs iff they are isomorphic."""
    return write_graph6(canonical_form(g)).encode("ascii")


def automorphism_orbits(g: Graph) -> list[int]:
    return canonical_labeling(g.n, g.rows)[1]


try:
    import pynauty
except ImportError:  # pragma: no cover - exercised only without the extra
    pynauty = None


if pynauty is not None:

    class _BareGraph(pynauty.Graph):
        # skips pynauty's per-vertex validation; rows are trusted here
        def __init__(self, n, adj):
            self.number_of_vertices = n
            self.directed = False
            self._adjacency_dict = adj
            self._vertex_coloring = []


def nauty_labeling(n: int, rows: Sequence[int]) -> tuple[list[int], list[int]]:
    """Same contract as ``canonical_labeling`` (different canonical order), via nauty."""
    # nauty symmetrises undirected input, so each edge is listed once
    adj = {v: list(bits(rows[v] & ((1 << v) - 1))) for v in range(1, n)}
    g = _BareGraph(n, adj)
    lab = pynauty.canon_label(g)
    orbits = pynauty.autgrp(g)[3]
    return list(lab), list(orbits)


def get_labeller(backend: str | None = None) -> Labeller:
    """``"nauty"`` (default when pynauty imports) or ``"python"``."""
    if backend is None:
        backend = "nauty" if pynauty is not None else "python"
    if backend == "nauty":
        if pynauty is None:
            raise RuntimeError("pynauty is not installed")
        return nauty_labeling
    if backend == "python":
        return canonical_labeling
    raise ValueError(f"unknown labelling backend {backend!r}")
