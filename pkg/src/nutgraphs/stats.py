"""Per-graph kernel indicators and the per-order frequency tables built from them."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .exact import (
    Inertia,
    NullityError,
    primitive_vector,
    faddeev_leverrier,
    inertia_from_polynomial,
    nbo_offset,
    r_ratio,
)
from .graph import Graph, girth, is_connected, max_degree, write_graph6


class NotNutError(ValueError):
    """A graph handed to the statistics engine is not a nut graph."""


@dataclass(frozen=True)
class NutReport:
    graph6: str
    order: int
    kernel: tuple[int, ...]
    r: Fraction
    inertia: Inertia
    nbo_offset: int
    girth: float
    chemical: bool

    @property
    def delta_q(self) -> int:
        return self.inertia.delta_q


def nut_report(g: Graph) -> NutReport:
    """Exact indicators of a nut graph; raises NotNutError otherwise."""
    if g.n < 2:
        raise NotNutError("order below 2")
    coeffs, adj = faddeev_leverrier(g)
    if coeffs[0] != 0:
        raise NotNutError("adjacency matrix is nonsingular")
    if any(x == 0 for row in adj for x in row):
        raise NotNutError("adjugate has a zero entry")
    try:
        kernel = primitive_vector([row[0] for row in adj])
    except NullityError as exc:  # pragma: no cover - excluded by the zero check
        raise NotNutError(str(exc)) from None
    inert = inertia_from_polynomial(coeffs)
    return NutReport(
        graph6=write_graph6(g),
        order=g.n,
        kernel=kernel,
        r=r_ratio(kernel),
        inertia=inert,
        nbo_offset=nbo_offset(inert),
        girth=girth(g),
        chemical=max_degree(g) <= 3 and is_connected(g),
    )


def format_rational(x: Fraction, machine: bool = False) -> str:
    """"p/q" always in machine output; integers lose the "/1" in human output."""
    if x.denominator == 1 and not machine:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass
class OrderRow:
    order: int
    count: int = 0
    nbo: Counter = field(default_factory=Counter)
    girths: Counter = field(default_factory=Counter)
    min_r: Fraction | None = None
    min_r_freq: int = 0
    max_r: Fraction | None = None
    max_r_freq: int = 0
    k0_r2: int = 0

    def add(self, rep: NutReport) -> None:
        self.count += 1
        self.nbo[rep.nbo_offset] += 1
        self.girths[rep.girth] += 1
        r = rep.r
        if self.min_r is None or r < self.min_r:
            self.min_r, self.min_r_freq = r, 1
        elif r == self.min_r:
            self.min_r_freq += 1
        if self.max_r is None or r > self.max_r:
            self.max_r, self.max_r_freq = r, 1
        elif r == self.max_r:
            self.max_r_freq += 1
        if rep.nbo_offset == 0 and r == 2:
            self.k0_r2 += 1


class StatsTable:
    """Accumulates reports; holds only per-order counters, never the graphs."""

    def __init__(self, orders: Iterable[int] = ()):
        self.rows: dict[int, OrderRow] = {n: OrderRow(n) for n in orders}

    def add(self, rep: NutReport) -> None:
        row = self.rows.get(rep.order)
        if row is None:
            row = self.rows[rep.order] = OrderRow(rep.order)
        row.add(rep)

    def add_graph(self, g: Graph) -> NutReport:
        rep = nut_report(g)
        self.add(rep)
        return rep

    def __getitem__(self, n: int) -> OrderRow:
        return self.rows[n]

    def __len__(self):
        return len(self.rows)

    def _columns(self):
        ks = sorted({k for row in self.rows.values() for k in row.nbo})
        gs = sorted({g for row in self.rows.values() for g in row.girths})
        return ks, gs

    def table(self, machine: bool = False) -> list[list[str]]:
        ks, gs = self._columns()
        header = ["n", "count"]
        header += [f"k={k:+d}" if k else "k=0" for k in ks]
        header += ["min_r", "min_r_freq", "max_r", "max_r_freq", "k0_r2"]
        header += [f"g={'inf' if g == math.inf else int(g)}" for g in gs]
        out = [header]
        empty = "" if machine else "-"
        for n in sorted(self.rows):
            row = self.rows[n]
            cells = [str(n), str(row.count)]
            cells += [str(row.nbo.get(k, 0)) for k in ks]
            if row.count:
                cells += [
                    format_rational(row.min_r, machine),
                    str(row.min_r_freq),
                    format_rational(row.max_r, machine),
                    str(row.max_r_freq),
                ]
            else:
                cells += [empty] * 4
            cells.append(str(row.k0_r2))
            cells += [str(row.girths.get(g, 0)) for g in gs]
            out.append(cells)
        return out

    def render_tsv(self) -> str:
        return "".join("\t".join(r) + "\n" for r in self.table(machine=True))

    def render_text(self) -> str:
        rows = self.table(machine=False)
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        return "".join(
            "  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in rows
        )
