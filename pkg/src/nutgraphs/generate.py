"""Isomorph-free exhaustive generation of nut graphs by vertex addition.

Graphs of order k are built from graphs of order k-1 by adding a vertex
joined to every admissible neighbour set. Two isomorphism-rejection modes:

``canonical``
    Canonical construction path. The canonical deletion vertex of a graph is
    chosen among its minimum-degree vertices, first by the largest sum of
    neighbour degrees and then by canonical position; a child is kept iff its
    new vertex lies in the automorphism orbit of that vertex. Since the new
    vertex must have minimum degree, most children die before any labelling.

``dedup``
    Every level is stored in full, keyed by ``canon.canonical_code``. Slow and
    memory hungry; it exists as an independent baseline.

Nut-specific pruning: graphs of order n-1 must be nonsingular (every
vertex-deleted subgraph of a nut is), and an order-n child of a nonsingular
parent B with border row b is a nut iff b B^-1 b^T = 0 with b B^-1 zero-free.
The inverse of B modulo p is computed once per parent and reused for all of
its children.
"""

from __future__ import annotations

import logging
import os
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .canon import bits, canonical_code, get_labeller, relabelled_rows
from .graph import (
    Graph,
    delete_vertex,
    girth,
    is_connected,
    max_degree,
    parse_graph6,
    write_graph6,
)
from .modp import build_schedule, inverse_of_rows, screen_bordered
from .nut import is_nut

log = logging.getLogger(__name__)

MAX_GENERATION_ORDER = 62  # neighbour sets travel as int64 bit masks
WORKERS_ENV = "NUTGRAPHS_WORKERS"


@dataclass(frozen=True)
class GenerationConstraints:
    order: int
    min_girth: int | None = None
    max_degree: int | None = None
    chemical: bool = False

    def __post_init__(self):
        if not 2 <= self.order <= MAX_GENERATION_ORDER:
            raise ValueError(f"order must lie in 2..{MAX_GENERATION_ORDER}")
        if self.min_girth is not None and self.min_girth < 3:
            raise ValueError("minimum girth must be at least 3")
        if self.chemical:
            if self.max_degree not in (None, 3):
                raise ValueError("chemical graphs have maximum degree 3")
            object.__setattr__(self, "max_degree", 3)
        if self.max_degree is not None and self.max_degree < 0:
            raise ValueError("maximum degree must be non-negative")

    @property
    def degree_cap(self) -> int:
        return self.order - 1 if self.max_degree is None else self.max_degree

    def admits(self, g: Graph) -> bool:
        """Structural constraints alone (order, girth, degree, connectivity)."""
        if g.n != self.order:
            return False
        if self.min_girth is not None and girth(g) < self.min_girth:
            return False
        if max_degree(g) > self.degree_cap:
            return False
        return not self.chemical or is_connected(g)


def _balls(rows: Sequence[int], radius: int) -> list[int]:
    """For each vertex, the vertices at distance 1..radius."""
    out = []
    for v in range(len(rows)):
        seen = 1 << v
        frontier = seen
        for _ in range(radius):
            nxt = 0
            for u in bits(frontier):
                nxt |= rows[u]
            frontier = nxt & ~seen
            if not frontier:
                break
            seen |= frontier
        out.append(seen & ~(1 << v))
    return out


class NutGenerator:
    """One generation run. Iterate ``run()``; ``counters`` collects statistics.

    ``prune=False`` switches off every shortcut (girth/degree pruning of
    partial graphs, degree look-ahead, the nonsingular-parent rule and the
    bordered screen): all graphs of the target order are built and filtered
    at the end. Only useful for checking that the pruning is sound.

    ``target="all"`` emits every graph meeting the structural constraints
    (no nut condition); the nut rules are then off as well.
    """

    def __init__(
        self,
        constraints: GenerationConstraints,
        mode: str = "canonical",
        backend: str | None = None,
        prune: bool = True,
        multi_prime: bool = False,
        target: str = "nuts",
        split_order: int = 6,
        res: int = 0,
        mod: int = 1,
    ):
        if mode not in ("canonical", "dedup"):
            raise ValueError(f"unknown mode {mode!r}")
        if target not in ("nuts", "all"):
            raise ValueError(f"unknown target {target!r}")
        self.c = constraints
        self.n = constraints.order
        self.cap = constraints.degree_cap
        self.mode = mode
        self.labeller = get_labeller(backend) if mode == "canonical" else None
        self.nuts = target == "nuts"
        self.prune = prune
        self.nut_rules = prune and self.nuts
        self.multi_prime = multi_prime
        self.radius = (constraints.min_girth or 3) - 3 if prune else 0
        self.split_order = max(1, min(split_order, self.n - 2))
        self.res, self.mod = res, mod
        self.sched_n = build_schedule(self.n)
        self.sched_parent = build_schedule(self.n - 1)
        self.counters: Counter = Counter()

    # -- neighbour sets -------------------------------------------------------

    def _choose(self, free, r, base, balls):
        if balls is None:
            for combo in combinations(free, r):
                m = base
                for u in combo:
                    m |= 1 << u
                yield m
            return
        forbid = 0
        for u in bits(base):
            if balls[u] & base:
                return
            forbid |= balls[u]

        def rec(i, r, mask, forbid):
            if r == 0:
                yield mask
                return
            for j in range(i, len(free) - r + 1):
                u = free[j]
                b = 1 << u
                if forbid & b:
                    continue
                yield from rec(j + 1, r - 1, mask | b, forbid | balls[u])

        yield from rec(0, r, base, forbid)

    def neighbour_sets(self, rows, degs, dmin, ordered):
        """Masks of admissible neighbourhoods for a new vertex.

        ``ordered``: the new vertex must end up with minimum degree.
        """
        m = len(rows)
        cap = self.cap if self.prune else m
        balls = _balls(rows, self.radius) if self.radius > 0 else None
        if ordered:
            lo = min(degs)
            for d in range(dmin, min(lo + 1, cap, m) + 1):
                forced = 0
                if d:
                    for u in range(m):
                        if degs[u] == d - 1:
                            forced |= 1 << u
                nf = forced.bit_count()
                if nf > d:
                    continue
                free = [u for u in range(m) if d <= degs[u] < cap]
                yield from self._choose(free, d - nf, forced, balls)
        else:
            free = [u for u in range(m) if degs[u] < cap]
            for d in range(dmin, min(cap, m) + 1):
                yield from self._choose(free, d, 0, balls)

    def _lookahead_ok(self, degs) -> bool:
        """Can this partial graph still grow into one with minimum degree >= 2?"""
        left = self.n - len(degs)
        deficit = 0
        for d in degs:
            if d < 2:
                if 2 - d > left:
                    return False
                deficit += 2 - d
        return deficit <= left * min(self.cap, len(degs))

    # -- canonicity -----------------------------------------------------------

    def _deletion_candidates(self, rows, degs):
        """Cheap half of the canonicity test.

        Returns None if the new vertex is certainly not the canonical deletion
        vertex, an empty list if it certainly is, and otherwise the vertices
        still tied with it (nauty decides among those).
        """
        k = len(rows)
        new = k - 1
        d = degs[new]
        cands = [u for u in range(k) if degs[u] == d]
        if len(cands) == 1:
            return []
        if d:
            # two rounds of neighbour-degree sums break most ties cheaply
            s1: dict[int, int] = {}

            def first(u):
                if u not in s1:
                    s1[u] = sum([degs[w] for w in bits(rows[u])])
                return s1[u]

            def second(u):
                return sum([first(w) for w in bits(rows[u])])

            for key in (first, second):
                vals = {u: key(u) for u in cands}
                top = max(vals.values())
                if vals[new] != top:
                    return None
                cands = [u for u in cands if vals[u] == top]
                if len(cands) == 1:
                    return []
        return cands

    def _orbit_test(self, rows, cands) -> bool:
        self.counters["labellings"] += 1
        lab, orbits = self.labeller(len(rows), rows)
        pos = {v: i for i, v in enumerate(lab)}
        chosen = max(cands, key=pos.__getitem__)
        return orbits[chosen] == orbits[len(rows) - 1]

    def is_canonical(self, rows, degs) -> bool:
        """Is the last vertex in the orbit of the canonical deletion vertex?"""
        cands = self._deletion_candidates(rows, degs)
        if cands is None:
            return False
        return not cands or self._orbit_test(rows, cands)

    # -- nut machinery ------------------------------------------------------------

    def parent_inverse(self, rows):
        """(p, B^-1 mod p) for a nonsingular parent, None if provably singular."""
        product = 1
        for p in self.sched_parent:
            inv = inverse_of_rows(rows, p)
            if inv is not None:
                return p, inv
            product *= p
            if product > self.sched_parent.budget:
                return None
        return None  # pragma: no cover

    def _nut_children(self, rows, degs, ordered, found=None):
        """Children of a nonsingular order-(n-1) parent that pass the bordered screen."""
        if found is None:
            found = self.parent_inverse(rows)
        if found is None:
            self.counters["singular_parents"] += 1
            return
        p, inv = found
        self.counters["parents"] += 1
        masks = list(self.neighbour_sets(rows, degs, 2, ordered))
        if not masks:
            return
        # the full zero-free test is exact only when this prime exceeds the bound
        exact = p > self.sched_n.budget
        ok = screen_bordered(inv, np.array(masks, dtype=np.int64), p, exact)
        self.counters["candidates"] += len(masks)
        for mask, keep in zip(masks, ok):
            if keep:
                yield self._child(rows, degs, mask)

    @staticmethod
    def _child(rows, degs, mask):
        k = len(rows)
        new_rows = list(rows)
        new_degs = list(degs)
        for u in bits(mask):
            new_rows[u] |= 1 << k
            new_degs[u] += 1
        new_rows.append(mask)
        new_degs.append(mask.bit_count())
        return tuple(new_rows), tuple(new_degs)

    def _accept_final(self, rows) -> Graph | None:
        g = Graph(len(rows), rows)
        if not self.c.admits(g):
            return None
        if self.nuts:
            self.counters["nut_checks"] += 1
            if not is_nut(g, self.multi_prime):
                return None
        return g

    # -- canonical construction path ---------------------------------------------

    def _distinct(self, rows, children):
        """Drop children that are isomorphic through an automorphism of the parent."""
        if len(children) < 2:
            return children
        _, orbits = self.labeller(len(rows), rows)
        if all(o == v for v, o in enumerate(orbits)):
            return children  # trivial group: distinct neighbour sets give distinct children
        seen = set()
        out = []
        for child in children:
            lab, _ = self.labeller(len(child[0]), child[0])
            code = relabelled_rows(child[0], lab)
            if code not in seen:
                seen.add(code)
                out.append(child)
        return out

    def _expand(self, rows, degs, ordered):
        """Accepted children as (rows, degs, inverse-or-None) triples.

        Children of order n-1 must be nonsingular when the nut rules are on;
        that test runs before nauty because it is cheaper and kills about half.
        """
        k = len(rows) + 1
        last = self.nut_rules and k == self.n - 1
        kept = []
        for mask in self.neighbour_sets(rows, degs, 0, ordered):
            crows, cdegs = self._child(rows, degs, mask)
            if self.nut_rules and not self._lookahead_ok(cdegs):
                continue
            cands = self._deletion_candidates(crows, cdegs) if ordered else []
            if cands is None:
                continue
            found = None
            if last:
                found = self.parent_inverse(crows)
                if found is None:
                    self.counters["singular_parents"] += 1
                    continue
            if cands and not self._orbit_test(crows, cands):
                continue
            kept.append((crows, cdegs, found))
        if ordered:
            kept = self._distinct(rows, kept)
        self.counters[f"order_{k}"] += len(kept)
        return kept

    def _dfs(self, rows, degs, tag, found=None):
        k = len(rows)
        if k == self.split_order:
            self._split_index += 1
            if (self._split_index - 1) % self.mod != self.res:
                return
            tag = self._split_index - 1
        if self.nut_rules and k == self.n - 1:
            kept = [
                c for c in self._nut_children(rows, degs, True, found) if self.is_canonical(*c)
            ]
            for child in self._distinct(rows, kept):
                g = self._accept_final(child[0])
                if g is not None:
                    yield tag, g
            return
        if k == self.n:
            g = self._accept_final(rows)
            if g is not None:
                yield tag, g
            return
        for crows, cdegs, cfound in self._expand(rows, degs, ordered=True):
            yield from self._dfs(crows, cdegs, tag, cfound)

    def run_tagged(self) -> Iterator[tuple[int, Graph]]:
        """Yield (index of the order-``split_order`` ancestor, graph)."""
        if self.mode == "dedup":
            for g in self._run_dedup():
                yield 0, g
            return
        self._split_index = 0
        yield from self._dfs((0,), (0,), 0)

    def run(self) -> Iterator[Graph]:
        for _, g in self.run_tagged():
            yield g

    # -- dedup baseline -------------------------------------------------------------

    def _run_dedup(self) -> Iterator[Graph]:
        level = {canonical_code(Graph(1, (0,))): ((0,), (0,), None)}
        last = self.n - 1 if self.nut_rules else self.n
        for k in range(2, last + 1):
            nxt: dict[bytes, tuple] = {}
            for code in sorted(level):
                rows, degs, _ = level[code]
                for child in self._expand(rows, degs, ordered=False):
                    key = canonical_code(Graph(k, child[0]))
                    nxt.setdefault(key, child)
            level = nxt
            self.counters[f"level_{k}"] = len(level)
        found: dict[bytes, Graph] = {}
        if self.nut_rules:
            for code in sorted(level):
                for rows, _ in self._nut_children(*level[code][:2], False, level[code][2]):
                    g = Graph(self.n, rows)
                    key = canonical_code(g)
                    if key not in found:
                        found[key] = g
            for key in sorted(found):
                g = self._accept_final(found[key].rows)
                if g is not None:
                    yield g
        else:
            for key in sorted(level):
                g = self._accept_final(level[key][0])
                if g is not None:
                    yield g


def is_canonical_extension(parent: Graph, child: Graph, backend: str | None = None) -> bool:
    """Would the search accept ``child`` (``parent`` plus its last vertex) on
    the canonical-deletion test?

    This is the per-child half of canonicity. Children of one parent that are
    images of each other under the parent's automorphisms pass it together;
    the generator keeps one of each such group.
    """
    if child.n != parent.n + 1 or delete_vertex(child, child.n - 1) != parent:
        raise ValueError("child is not the parent plus one final vertex")
    degs = tuple(child.degrees())
    if degs[-1] != min(degs):
        return False
    gen = NutGenerator(GenerationConstraints(max(child.n, 2)), backend=backend, target="all")
    return gen.is_canonical(child.rows, degs)


def _worker(args):
    constraints, kwargs, res, mod = args
    gen = NutGenerator(constraints, res=res, mod=mod, **kwargs)
    return [(tag, write_graph6(g)) for tag, g in gen.run_tagged()], dict(gen.counters)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def generate(
    constraints: GenerationConstraints,
    mode: str = "canonical",
    workers: int | None = None,
    counters: Counter | None = None,
    **kwargs,
) -> Iterator[Graph]:
    """All nut graphs meeting ``constraints``, one per isomorphism class.

    With ``workers > 1`` the canonical search tree is split by residue of the
    ancestor index at order ``split_order``; output order is the same as a
    single-process run.
    """
    if workers is None:
        workers = default_workers()
    if workers <= 1 or mode != "canonical":
        gen = NutGenerator(constraints, mode=mode, **kwargs)
        yield from gen.run()
        if counters is not None:
            counters.update(gen.counters)
        return
    import multiprocessing

    jobs = [(constraints, dict(mode=mode, **kwargs), r, workers) for r in range(workers)]
    with multiprocessing.Pool(workers) as pool:
        parts = pool.map(_worker, jobs)
    merged = []
    for items, ctr in parts:
        merged.extend(items)
        if counters is not None:
            counters.update(ctr)
    merged.sort(key=lambda t: t[0])  # stable: keeps DFS order within a subtree
    for _, g6 in merged:
        yield parse_graph6(g6)


def generate_graphs(
    order: int,
    max_degree: int | None = None,
    min_girth: int | None = None,
    connected: bool = False,
    backend: str | None = None,
) -> Iterator[Graph]:
    """Every graph of the given order up to isomorphism (no nut condition)."""
    if order == 1:
        yield Graph(1, (0,))
        return
    c = GenerationConstraints(order, min_girth=min_girth, max_degree=max_degree)
    for g in NutGenerator(c, backend=backend, target="all").run():
        if not connected or is_connected(g):
            yield g
