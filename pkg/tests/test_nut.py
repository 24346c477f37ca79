import dataclasses

import pytest

from conftest import CHEMICAL_NUT_9, NUTS_7, random_graph
from nutgraphs.exact import adjugate, is_nut_exact
from nutgraphs.generate import generate_graphs
from nutgraphs.graph import Graph, parse_graph6
from nutgraphs.modp import LARGEST_PRIME, build_schedule
from nutgraphs.nut import (
    MULTI_PRIME_CEILING,
    NutCertificate,
    PrimeRecord,
    Reason,
    is_nut,
    verify_certificate,
)

C4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
K3 = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
# a 13-vertex nut whose adjugate is divisible by 3, so the small-prime path discards 3
NUT_DISCARDS_3 = "LAQsTjkix@HYPw"


class TestVerdicts:
    def test_order_7_fast_path(self):
        for s in NUTS_7:
            c = is_nut(parse_graph6(s))
            assert c.nut and c.reason is None and c.fast_path
            assert [r.p for r in c.primes] == [LARGEST_PRIME]

    def test_c4(self):
        c = is_nut(C4)
        assert not c.nut and c.reason is Reason.NULLITY_AT_LEAST_2

    def test_k1(self):
        c = is_nut(Graph.empty(1))
        assert not c and c.reason is Reason.ORDER_TOO_SMALL

    def test_full_rank(self):
        assert is_nut(K3).reason is Reason.FULL_RANK

    def test_kernel_has_zero(self):
        p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
        assert is_nut(p3).reason is Reason.KERNEL_HAS_ZERO

    def test_thirteen_nuts_of_order_8(self):
        assert sum(1 for g in generate_graphs(8, connected=True) if is_nut(g)) == 13

    def test_determinism(self):
        g = parse_graph6(CHEMICAL_NUT_9)
        assert is_nut(g) == is_nut(g)
        assert is_nut(g).dumps() == is_nut(g).dumps()


class TestMultiPrime:
    def test_schedule_needs_several_primes(self):
        s = build_schedule(8, MULTI_PRIME_CEILING)
        assert s.required_count > 1

    def test_discarded_prime(self):
        g = parse_graph6(NUT_DISCARDS_3)
        # oracle: every adjugate entry is divisible by 3
        assert all(x % 3 == 0 for row in adjugate(g) for x in row)
        c = is_nut(g, multi_prime=True)
        assert c.nut and not c.fast_path and c.discarded == 1
        assert any(r.p == 3 and r.rank < g.n - 1 and r.kernel is None for r in c.primes)
        assert verify_certificate(g, c)
        kept = 1
        for r in c.primes:
            if r.kernel is not None:
                kept *= r.p
        assert kept > c.budget

    def test_case_a(self):
        c = is_nut(C4, multi_prime=True)
        assert c.reason is Reason.NULLITY_AT_LEAST_2
        dropped = 1
        for r in c.primes:
            assert r.rank < 3
            dropped *= r.p
        assert dropped > c.budget

    def test_nut_coverage(self):
        for s in NUTS_7:
            c = is_nut(parse_graph6(s), multi_prime=True)
            kernels = [r.kernel for r in c.primes if r.kernel is not None]
            assert c.nut and len(kernels) > 1
            assert all(any(k[i] for k in kernels) for i in range(7))

    def test_agrees_with_fast_path(self, rng):
        for n in range(2, 8):
            for g in generate_graphs(n):
                assert bool(is_nut(g)) == bool(is_nut(g, multi_prime=True))
        for _ in range(2000):
            g = random_graph(rng, rng.randint(8, 20), rng.choice([0.2, 0.35, 0.5]))
            a, b = is_nut(g), is_nut(g, multi_prime=True)
            assert (a.nut, a.reason) == (b.nut, b.reason)


class TestOracle:
    def test_exhaustive_to_order_7(self):
        for n in range(1, 8):
            for g in generate_graphs(n):
                assert bool(is_nut(g)) == is_nut_exact(g)

    def test_random(self, rng):
        for _ in range(3000):
            g = random_graph(rng, rng.randint(9, 16), rng.choice([0.2, 0.3, 0.5]))
            assert bool(is_nut(g)) == is_nut_exact(g)


class TestCertificate:
    def test_round_trip(self):
        for s in NUTS_7 + (NUT_DISCARDS_3,):
            g = parse_graph6(s)
            for mp in (False, True):
                c = is_nut(g, multi_prime=mp)
                again = NutCertificate.loads(c.dumps())
                assert again == c
                assert verify_certificate(g, again)

    def test_every_verdict_verifies(self, rng):
        for _ in range(300):
            g = random_graph(rng, rng.randint(1, 12), rng.random())
            for mp in (False, True):
                assert verify_certificate(g, is_nut(g, multi_prime=mp))

    def test_tampered_rank(self):
        g = parse_graph6(CHEMICAL_NUT_9)
        c = is_nut(g)
        bad = dataclasses.replace(c, primes=(dataclasses.replace(c.primes[0], rank=9),))
        assert not verify_certificate(g, bad)

    def test_tampered_verdict(self):
        g = parse_graph6(CHEMICAL_NUT_9)
        c = is_nut(g)
        assert not verify_certificate(g, dataclasses.replace(c, nut=False, reason=Reason.KERNEL_HAS_ZERO))
        assert not verify_certificate(g, dataclasses.replace(c, budget=c.budget + 1))

    def test_truncated_or_padded(self):
        g = parse_graph6(NUT_DISCARDS_3)
        c = is_nut(g, multi_prime=True)
        assert not verify_certificate(g, dataclasses.replace(c, primes=c.primes[:-1]))
        extra = PrimeRecord(2147483629, 12, None)
        assert not verify_certificate(g, dataclasses.replace(c, primes=c.primes + (extra,)))
        assert not verify_certificate(g, dataclasses.replace(c, fast_path=True))

    def test_other_graph_of_same_order(self, rng):
        g = parse_graph6(CHEMICAL_NUT_9)
        c = is_nut(g)
        for _ in range(200):
            h = random_graph(rng, 9, 0.4)
            if h == g:
                continue
            assert not verify_certificate(h, c)
            # even with the graph6 field swapped, recorded ranks/kernels must match h
            forged = dataclasses.replace(c, graph6=str(h))
            if verify_certificate(h, forged):
                assert is_nut(h) == forged

    def test_text_format(self):
        text = is_nut(C4).dumps()
        assert text.splitlines()[:4] == [
            f"graph6 {C4}",
            "verdict not-nut NullityAtLeast2",
            "budget 3",
            "fast_path yes",
        ]
        assert text.splitlines()[4] == f"prime {LARGEST_PRIME} rank 2 kernel -"

    def test_bad_text(self):
        with pytest.raises(ValueError):
            NutCertificate.loads("graph6 Cr\n")
        with pytest.raises(ValueError):
            NutCertificate.loads("graph6 Cr\nverdict nut\nbudget 3\nfast_path no\nprime 5 rank\n")
