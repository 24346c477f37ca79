import random

import pytest

from nutgraphs.graph import Graph

# smallest chemical nut, found by generation and cross-checked with the exact oracle
CHEMICAL_NUT_9 = "HwCOOMO"
# the three nuts of order 7
NUTS_7 = ("FqMCG", "F~qc_", "F~ogo")


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph.from_edges(n, [(i, j) for j in range(n) for i in range(j) if rng.random() < p])


@pytest.fixture
def rng():
    return random.Random(20240611)
