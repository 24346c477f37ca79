"""Dense linear algebra over prime fields F_p with p < 2**31.

Entries live in int64 arrays; every product of two reduced entries is below
2**62, so one reduction per multiply-add is enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import gmpy2
import numpy as np
from numba import njit

from .graph import Graph

LARGEST_PRIME = 2_147_483_647  # largest prime below 2**31

# Maximum |det| over all n x n 0/1 matrices, known exactly for small n.
EXACT_DELTA = {
    1: 1,
    2: 1,
    3: 2,
    4: 3,
    5: 5,
    6: 9,
    7: 32,
    8: 56,
    9: 144,
    10: 320,
    11: 1458,
    12: 3645,
    13: 9477,
    14: 25515,
    15: 131072,
    16: 327680,
    17: 1114112,
    18: 3411968,
    19: 19531250,
    20: 56640625,
}


def hadamard_budget(n: int) -> int:
    """Upper bound on |det| of an n x n 0/1 matrix.

    Exact for n <= 20; beyond that the ceiling of 2*((n+1)/4)**((n+1)/2),
    computed as the least m with m**2 * 4**n >= (n+1)**(n+1).
    """
    if n < 1:
        raise ValueError("order must be positive")
    if n in EXACT_DELTA:
        return EXACT_DELTA[n]
    num = (n + 1) ** (n + 1)
    den = 4**n
    c = -(-num // den)
    return math.isqrt(c - 1) + 1


def descending_primes(ceiling: int = LARGEST_PRIME) -> Iterator[int]:
    """Odd primes <= ceiling in descending order.

    Below a small ceiling the supply runs out at 3; the sequence then carries
    on with the primes above the ceiling, from 2**31 down, so it never ends.
    """
    p = ceiling + 1
    while p > 3:
        p = int(gmpy2.prev_prime(p))
        yield p
    if ceiling < LARGEST_PRIME:
        for q in descending_primes(LARGEST_PRIME):
            if q <= ceiling:
                return
            yield q


@dataclass(frozen=True)
class PrimeSchedule:
    order: int
    budget: int
    primes: tuple[int, ...]
    required_count: int
    ceiling: int = LARGEST_PRIME

    def __iter__(self) -> Iterator[int]:
        """The scheduled primes followed by as many further primes as a caller needs."""
        return descending_primes(self.ceiling)

    @property
    def single_prime(self) -> bool:
        return self.required_count == 1


@lru_cache(maxsize=None)
def build_schedule(n: int, ceiling: int = LARGEST_PRIME) -> PrimeSchedule:
    budget = hadamard_budget(max(n, 1))
    primes = []
    product = 1
    for p in descending_primes(ceiling):
        primes.append(p)
        product *= p
        if product > budget:
            break
    return PrimeSchedule(n, budget, tuple(primes), len(primes), ceiling)


@dataclass(frozen=True, eq=False)
class ModPMatrix:
    entries: np.ndarray
    p: int

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other):
        return (
            isinstance(other, ModPMatrix)
            and self.p == other.p
            and np.array_equal(self.entries, other.entries)
        )

    def __matmul__(self, other: "ModPMatrix") -> "ModPMatrix":
        if self.p != other.p:
            raise ValueError("moduli differ")
        return ModPMatrix(_matmul(self.entries, other.entries, self.p), self.p)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int) -> "ModPMatrix":
        a = np.array([[x % p for x in row] for row in rows], dtype=np.int64)
        return cls(a.reshape(len(rows), -1), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "ModPMatrix":
        return cls(np.eye(n, dtype=np.int64), p)


def adjacency_array(g: Graph) -> np.ndarray:
    return rows_to_array(g.rows)


def reduce_mod_p(g: Graph, p: int) -> ModPMatrix:
    if p <= 2:
        raise ValueError("modulus must be an odd prime")
    return ModPMatrix(adjacency_array(g), p)


# -- kernels ------------------------------------------------------------------


@njit(cache=True)
def _inv(x, p):
    # Fermat; p prime
    result = 1
    base = x % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


@njit(cache=True)
def _gauss_jordan(a, p, ncols):
    """Reduce ``a`` in place to reduced row echelon form, pivoting only in the
    first ``ncols`` columns. Returns (rank, pivot column per pivot row)."""
    rows, width = a.shape
    pivots = np.full(rows, -1, dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(width):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        s = _inv(a[r, c], p)
        if s != 1:
            for j in range(width):
                a[r, j] = a[r, j] * s % p
        for i in range(rows):
            if i != r:
                f = a[i, c]
                if f != 0:
                    g = p - f
                    for j in range(width):
                        if a[r, j] != 0:
                            a[i, j] = (a[i, j] + g * a[r, j]) % p
        pivots[r] = c
        r += 1
    return r, pivots


@njit(cache=True)
def _rank_kernel(a, p):
    n = a.shape[0]
    rank, pivots = _gauss_jordan(a, p, n)
    v = np.zeros(n, dtype=np.int64)
    if rank != n - 1:
        return rank, v
    is_pivot = np.zeros(n, dtype=np.bool_)
    for i in range(rank):
        is_pivot[pivots[i]] = True
    free = 0
    while is_pivot[free]:
        free += 1
    v[free] = 1
    for i in range(rank):
        v[pivots[i]] = (p - a[i, free]) % p
    first = 0
    while v[first] == 0:
        first += 1
    s = _inv(v[first], p)
    for j in range(n):
        v[j] = v[j] * s % p
    return rank, v


@njit(cache=True)
def _inverse(a, p):
    n = a.shape[0]
    aug = np.zeros((n, 2 * n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            aug[i, j] = a[i, j]
        aug[i, n + i] = 1
    rank, _ = _gauss_jordan(aug, p, n)
    return rank == n, aug[:, n:].copy()


@njit(cache=True)
def _matmul(a, b, p):
    n, k = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        for t in range(k):
            x = a[i, t]
            if x != 0:
                for j in range(m):
                    out[i, j] = (out[i, j] + x * b[t, j]) % p
    return out


@njit(cache=True)
def screen_bordered(inv, masks, p, need_full):
    """For each neighbour bit mask b: is b B^-1 b^T == 0, and (if ``need_full``)
    is b B^-1 free of zeros? ``inv`` is B^-1 mod p."""
    n = inv.shape[0]
    out = np.zeros(masks.shape[0], dtype=np.bool_)
    x = np.zeros(n, dtype=np.int64)
    for k in range(masks.shape[0]):
        mask = masks[k]
        for j in range(n):
            x[j] = 0
        for u in range(n):
            if (mask >> u) & 1:
                for j in range(n):
                    x[j] += inv[u, j]
        scalar = 0
        for u in range(n):
            x[u] %= p
            if (mask >> u) & 1:
                scalar += x[u]
        if scalar % p != 0:
            continue
        ok = True
        if need_full:
            for j in range(n):
                if x[j] == 0:
                    ok = False
                    break
        out[k] = ok
    return out


# -- public operations --------------------------------------------------------


def rank_and_kernel(m: ModPMatrix) -> tuple[int, tuple[int, ...] | None]:
    """Rank over F_p; a kernel vector normalised to leading entry 1 iff rank == n-1."""
    if m.n == 0:
        return 0, None
    rank, v = _rank_kernel(m.entries.copy(), m.p)
    if rank != m.n - 1:
        return int(rank), None
    return int(rank), tuple(int(x) for x in v)


def rank_mod_p(m: ModPMatrix) -> int:
    return rank_and_kernel(m)[0]


def inverse(m: ModPMatrix) -> ModPMatrix | None:
    ok, inv = _inverse(m.entries, m.p)
    return ModPMatrix(inv, m.p) if ok else None


def quadratic_form(b: Sequence[int], inv: ModPMatrix) -> tuple[int, tuple[int, ...]]:
    """Return (b B^-1 b^T mod p, b B^-1 mod p) for a 0/1 row vector ``b``."""
    if len(b) != inv.n:
        raise ValueError(f"vector of length {len(b)} against a {inv.n}x{inv.n} inverse")
    bv = np.asarray(b, dtype=np.int64)
    x = (bv @ inv.entries) % inv.p
    scalar = int((x * bv).sum() % inv.p)
    return scalar, tuple(int(t) for t in x)


def rows_to_array(rows: Sequence[int]) -> np.ndarray:
    """Adjacency matrix (int64) of bit-set rows."""
    n = len(rows)
    a = np.zeros((n, n), dtype=np.int64)
    for v, row in enumerate(rows):
        while row:
            low = row & -row
            a[v, low.bit_length() - 1] = 1
            row ^= low
    return a


def inverse_array(a: np.ndarray, p: int) -> np.ndarray | None:
    ok, inv = _inverse(a, p)
    return inv if ok else None


@njit(cache=True)
def _inverse_bits(rows, p):
    n = rows.shape[0]
    aug = np.zeros((n, 2 * n), dtype=np.int64)
    for i in range(n):
        r = rows[i]
        for j in range(n):
            aug[i, j] = (r >> j) & 1
        aug[i, n + i] = 1
    rank, _ = _gauss_jordan(aug, p, n)
    return rank == n, aug[:, n:].copy()


def inverse_of_rows(rows: Sequence[int], p: int) -> np.ndarray | None:
    """Inverse mod p of the adjacency matrix given as bit-set rows (order <= 62)."""
    ok, inv = _inverse_bits(np.array(rows, dtype=np.int64), p)
    return inv if ok else None
