"""Acceptance criteria 1-10, each printing one PASS/FAIL line.

Criteria 1-7 drive the command-line generator (``generate --stats --tsv``) and
compare the printed tables with the published counts. The graphs it emits are
reused for the property checks of criterion 9.
"""

import io
import os
import random
from collections import Counter
from fractions import Fraction

import pytest

from conftest import random_graph
from nutgraphs.canon import canonical_code
from nutgraphs.cli import main
from nutgraphs.exact import exact_determinant, is_nut_exact
from nutgraphs.generate import GenerationConstraints, NutGenerator, generate, generate_graphs
from nutgraphs.graph import (
    Graph,
    delete_vertex,
    is_bipartite,
    is_connected,
    min_degree,
    p4_expand,
    parse_graph6,
)
from nutgraphs.nut import is_nut
from nutgraphs.stats import nut_report

ALL_ORDERS = range(7, 11)
CHEM_ORDERS = range(9, 17)

NUT_COUNTS = {7: 3, 8: 13, 9: 560, 10: 12551}
CHEM_COUNTS = {9: 1, 10: 0, 11: 8, 12: 9, 13: 27, 14: 23, 15: 414, 16: 389}
CHEM_GIRTHS = {
    9: {3: 1},
    10: {},
    11: {3: 7, 4: 1},
    12: {3: 7, 4: 1, 5: 1},
    13: {3: 23, 4: 2, 5: 2},
    14: {3: 22, 5: 1},
    15: {3: 338, 4: 51, 5: 25},
    16: {3: 339, 4: 36, 5: 13, 6: 1},
}
NBO = {
    7: {0: 3},
    8: {0: 13},
    9: {-2: 1, -1: 65, 0: 494},
    10: {-2: 4, -1: 295, 0: 12169, 1: 83},
}
CHEM_NBO = {
    9: {0: 1},
    10: {},
    11: {0: 8},
    12: {0: 6, 1: 3},
    13: {0: 27},
    14: {-1: 1, 0: 21, 1: 1},
    15: {-1: 5, 0: 409},
    16: {-1: 5, 0: 311, 1: 73},
}
# (min r, frequency, max r, frequency)
R_EXTREMES = {7: (1, 3, 1, 3), 8: (1, 7, 2, 6), 9: (1, 83, 4, 4), 10: (1, 988, 6, 1)}
CHEM_R_EXTREMES = {
    9: (2, 1, 2, 1),
    10: None,
    11: (2, 6, 4, 1),
    12: (2, 9, 2, 9),
    13: (2, 7, 4, 8),
    14: (2, 9, 4, 6),
    15: (2, 80, 8, 2),
    16: (2, 195, 4, 73),
}
CHEM_K0_R2 = {9: 1, 10: 0, 11: 6, 12: 6, 13: 7, 14: 7, 15: 77, 16: 142}
EXTENDED_11 = 2_060_490

RANDOM_GRAPHS = 100_000


def verdict(capsys, number, title, problems, detail=""):
    status = "FAIL" if problems else "PASS"
    with capsys.disabled():
        print(f"\ncriterion {number:>2} {status}: {title}{'  ' + detail if detail else ''}")
        for p in problems[:10]:
            print(f"    {p}")
    assert not problems


def run_generate(order, *extra):
    out, err = io.StringIO(), io.StringIO()
    code = main(["generate", "--order", str(order), "--stats", "--tsv", *extra], io.StringIO(), out, err)
    assert code == 0, err.getvalue()
    lines = err.getvalue().splitlines()
    start = next(i for i, line in enumerate(lines) if line.startswith("n\tcount"))
    header = lines[start].split("\t")
    (row,) = [dict(zip(header, line.split("\t"))) for line in lines[start + 1 :]]
    return out.getvalue().split(), row


def nbo_of(row):
    return {int(k[2:]): int(v) for k, v in row.items() if k.startswith("k=") and int(v)}


def girths_of(row):
    return {int(k[2:]): int(v) for k, v in row.items() if k.startswith("g=") and int(v)}


def extremes_of(row):
    if not int(row["count"]):
        return None
    return (
        Fraction(row["min_r"]),
        int(row["min_r_freq"]),
        Fraction(row["max_r"]),
        int(row["max_r_freq"]),
    )


@pytest.fixture(scope="session")
def all_nuts():
    return {n: run_generate(n) for n in ALL_ORDERS}


@pytest.fixture(scope="session")
def chemical_nuts():
    return {n: run_generate(n, "--chemical") for n in CHEM_ORDERS}


def compare(label, got, want, problems):
    if got != want:
        problems.append(f"{label}: got {got}, expected {want}")


def test_criterion_01_counts(capsys, all_nuts):
    problems = []
    for n in ALL_ORDERS:
        compare(f"n={n}", len(all_nuts[n][0]), NUT_COUNTS[n], problems)
        compare(f"n={n} table count", int(all_nuts[n][1]["count"]), NUT_COUNTS[n], problems)
    # the girth >= 4 part of order 11 is cheap; the full order-11 count is extended
    g11 = Counter(girths_of(run_generate(11, "--girth", "4")[1]))
    compare("n=11 girth 4/5", (g11[4], g11[5]), (14, 2), problems)
    got = [len(all_nuts[n][0]) for n in ALL_ORDERS]
    verdict(capsys, 1, "nut counts, orders 7-10", problems, f"{got}; n=11 g4/g5 {g11[4]}/{g11[5]}")


@pytest.mark.skipif(not os.environ.get("NUTGRAPHS_EXTENDED"), reason="set NUTGRAPHS_EXTENDED=1")
def test_criterion_01_extended_order_11(capsys):
    count = sum(1 for _ in generate(GenerationConstraints(11)))
    problems = [] if count == EXTENDED_11 else [f"got {count}, expected {EXTENDED_11}"]
    verdict(capsys, 1, "extended: nut count, order 11", problems, str(count))


def test_criterion_02_chemical_counts(capsys, chemical_nuts):
    problems = []
    for n in CHEM_ORDERS:
        gs, row = chemical_nuts[n]
        compare(f"n={n}", len(gs), CHEM_COUNTS[n], problems)
        compare(f"n={n} girths", girths_of(row), CHEM_GIRTHS[n], problems)
    got = [len(chemical_nuts[n][0]) for n in CHEM_ORDERS]
    verdict(capsys, 2, "chemical nut counts and girths, orders 9-16", problems, str(got))


def test_criterion_03_nbo(capsys, all_nuts):
    problems = []
    for n in ALL_ORDERS:
        compare(f"n={n}", nbo_of(all_nuts[n][1]), NBO[n], problems)
    verdict(capsys, 3, "NBO offset histograms, orders 7-10", problems)


def test_criterion_04_chemical_nbo(capsys, chemical_nuts):
    problems = []
    for n in CHEM_ORDERS:
        compare(f"n={n}", nbo_of(chemical_nuts[n][1]), CHEM_NBO[n], problems)
    verdict(capsys, 4, "NBO offset histograms, chemical, orders 9-16", problems)


def test_criterion_05_r_extremes(capsys, all_nuts):
    problems = []
    for n in ALL_ORDERS:
        compare(f"n={n}", extremes_of(all_nuts[n][1]), R_EXTREMES[n], problems)
    verdict(capsys, 5, "r extremes, orders 7-10", problems)


def test_criterion_06_chemical_r_extremes(capsys, chemical_nuts):
    problems = []
    for n in CHEM_ORDERS:
        compare(f"n={n}", extremes_of(chemical_nuts[n][1]), CHEM_R_EXTREMES[n], problems)
    verdict(capsys, 6, "r extremes, chemical, orders 9-16", problems)


def test_criterion_07_k0_r2(capsys, chemical_nuts):
    problems = []
    for n in CHEM_ORDERS:
        compare(f"n={n}", int(chemical_nuts[n][1]["k0_r2"]), CHEM_K0_R2[n], problems)
    got = [int(chemical_nuts[n][1]["k0_r2"]) for n in CHEM_ORDERS]
    verdict(capsys, 7, "chemical nuts with k=0 and r=2, orders 9-16", problems, str(got))


def bounded_degree_graph(rng, n, d):
    pairs = [(i, j) for j in range(n) for i in range(j)]
    rng.shuffle(pairs)
    deg = [0] * n
    edges = []
    for i, j in pairs:
        if deg[i] < d and deg[j] < d:
            edges.append((i, j))
            deg[i] += 1
            deg[j] += 1
    return Graph.from_edges(n, edges)


def test_criterion_08_oracle_equivalence(capsys):
    problems = []
    tally = Counter()

    def check(g):
        exact = is_nut_exact(g)
        fast = is_nut(g)
        forced = is_nut(g, multi_prime=True)
        if forced.nut != exact:
            problems.append(f"{g}: multi-prime {forced.nut}, adjugate {exact}")
        if (fast.nut, fast.reason) != (forced.nut, forced.reason):
            problems.append(f"{g}: fast {fast.reason}, forced {forced.reason}")
        tally["nut" if exact else (forced.reason.name if forced.reason else "?")] += 1

    exhaustive = 0
    for n in range(1, 9):
        for g in generate_graphs(n, connected=True):
            check(g)
            exhaustive += 1
    rng = random.Random(20240611)
    for i in range(RANDOM_GRAPHS):
        n = rng.randint(9, 16)
        if i % 2:
            g = random_graph(rng, n, rng.choice([0.15, 0.2, 0.3, 0.5]))
        else:
            g = bounded_degree_graph(rng, n, rng.choice([3, 4]))
        check(g)
    # a sample that never exercises the singular cases would prove little
    if tally["nut"] < 100 or tally["NULLITY_AT_LEAST_2"] < 100 or tally["KERNEL_HAS_ZERO"] < 100:
        problems.append(f"degenerate sample: {dict(tally)}")
    detail = f"{exhaustive} exhaustive + {RANDOM_GRAPHS} random; {dict(sorted(tally.items()))}"
    verdict(capsys, 8, "multi-prime = adjugate = fast path", problems, detail)


def test_criterion_09_properties(capsys, all_nuts, chemical_nuts):
    problems = []
    graphs = [parse_graph6(s) for n in ALL_ORDERS for s in all_nuts[n][0]]
    chemical = [parse_graph6(s) for n in CHEM_ORDERS for s in chemical_nuts[n][0]]
    for g in graphs + chemical:
        if not is_connected(g) or is_bipartite(g) or min_degree(g) < 2:
            problems.append(f"{g}: structural invariant")
    deletions = 0
    for g in graphs:
        for v in range(g.n):
            deletions += 1
            if exact_determinant(delete_vertex(g, v)) == 0:
                problems.append(f"{g} minus vertex {v}: singular")
    for g in chemical:
        r = nut_report(g).r
        if r < 2:
            problems.append(f"chemical {g}: r = {r}")
    rng = random.Random(7)
    sample = rng.sample(graphs, 50) + rng.sample(chemical, 50)
    for g in sample:
        e = rng.choice(list(g.edges()))
        h = p4_expand(g, e)
        if not is_nut(h) or not is_nut_exact(h):
            problems.append(f"{g} with P4 on {e}: not a nut")
        elif nut_report(h).r != nut_report(g).r:
            problems.append(f"{g} with P4 on {e}: r changed")
    detail = f"{len(graphs) + len(chemical)} nuts, {deletions} deletions, {len(sample)} expansions"
    verdict(capsys, 9, "structural, determinant, r >= 2 and P4 properties", problems, detail)


def test_criterion_10_mode_equivalence(capsys):
    problems = []
    for chemical in (False, True):
        for n in range(2, 10):
            c = GenerationConstraints(n, chemical=chemical)
            a = [canonical_code(g) for g in generate(c)]
            b = [canonical_code(g) for g in NutGenerator(c, mode="dedup").run()]
            if len(set(a)) != len(a) or set(a) != set(b):
                problems.append(f"n={n} chemical={chemical}: {len(a)} vs {len(b)}")
    verdict(capsys, 10, "canonical and dedup modes agree, orders <= 9", problems)


CUBIC_12 = os.environ.get("NUTGRAPHS_CUBIC_12")


@pytest.mark.skipif(not CUBIC_12, reason="set NUTGRAPHS_CUBIC_12 to a graph6 file of 12-vertex cubic polyhedra")
def test_cubic_polyhedra_12(capsys):
    with open(CUBIC_12) as f:
        out, err = io.StringIO(), io.StringIO()
        assert main(["filter"], f, out, err) == 0
    found = len(out.getvalue().split())
    verdict(capsys, 0, "12-vertex cubic polyhedra", [] if found == 2 else [f"{found} nuts"], str(found))
