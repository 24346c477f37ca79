"""Exact integer linear algebra: the ground-truth side of every mod-p shortcut."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence, Union

from .graph import Graph

IntMatrix = list[list[int]]
MatrixLike = Union[Graph, Sequence[Sequence[int]]]


class NullityError(ValueError):
    """Raised when a computation needs nullity exactly one and the matrix has another."""


def int_matrix(a: MatrixLike) -> IntMatrix:
    if isinstance(a, Graph):
        return a.adjacency_matrix()
    rows = [list(map(int, r)) for r in a]
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix is not square")
    return rows


def _bareiss(m: IntMatrix) -> tuple[int, int]:
    """Fraction-free elimination in place. Returns (rank, determinant)."""
    n = len(m)
    if n == 0:
        return 0, 1
    sign = 1
    prev = 1
    rank = 0
    cols = n
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, n) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        pr = m[r]
        pv = pr[c]
        for i in range(r + 1, n):
            row = m[i]
            f = row[c]
            for j in range(c + 1, cols):
                row[j] = (pv * row[j] - f * pr[j]) // prev
            row[c] = 0
        prev = pv
        r += 1
        rank += 1
    det = sign * m[n - 1][n - 1] if rank == n else 0
    return rank, det


def exact_determinant(a: MatrixLike) -> int:
    return _bareiss(int_matrix(a))[1]


def exact_rank(a: MatrixLike) -> int:
    return _bareiss(int_matrix(a))[0]


def faddeev_leverrier(a: MatrixLike) -> tuple[list[int], IntMatrix]:
    """Characteristic polynomial coefficients (constant term first) and adjugate.

    M_0 = 0, M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k;
    then adj A = (-1)^(n-1) M_n.  All divisions are exact.
    """
    m = int_matrix(a)
    n = len(m)
    support = [[(t, x) for t, x in enumerate(row) if x] for row in m]
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        c = coeffs[n - k + 1]
        nxt = []
        for i in range(n):
            row = [0] * n
            for t, x in support[i]:
                src = mk[t]
                if x == 1:
                    for j in range(n):
                        row[j] += src[j]
                else:
                    for j in range(n):
                        row[j] += x * src[j]
            row[i] += c
            nxt.append(row)
        mk = nxt
        trace = sum(x * mk[t][i] for i in range(n) for t, x in support[i])
        q, rem = divmod(-trace, k)
        assert rem == 0, "inexact Faddeev-LeVerrier division"
        coeffs[n - k] = q
    if n % 2 == 0:
        mk = [[-x for x in row] for row in mk]
    return coeffs, mk


def characteristic_polynomial(a: MatrixLike) -> list[int]:
    """Coefficients of det(xI - A), constant term first; the last entry is 1."""
    return faddeev_leverrier(a)[0]


def adjugate(a: MatrixLike) -> IntMatrix:
    return faddeev_leverrier(a)[1]


def primitive_vector(v: Sequence[int]) -> tuple[int, ...]:
    g = reduce(math.gcd, v, 0)
    if g == 0:
        raise NullityError("zero vector")
    first = next(x for x in v if x)
    if first < 0:
        g = -g
    return tuple(x // g for x in v)


def exact_kernel_vector(a: MatrixLike) -> tuple[int, ...]:
    """Primitive integer kernel vector of a nullity-1 matrix, leading entry positive.

    Taken from the first nonzero column of the adjugate.
    """
    coeffs, adj = faddeev_leverrier(a)
    if coeffs[0] != 0:
        raise NullityError("matrix is nonsingular")
    n = len(adj)
    for j in range(n):
        col = [adj[i][j] for i in range(n)]
        if any(col):
            return primitive_vector(col)
    raise NullityError("nullity is at least 2")


def is_nut_exact(g: Graph) -> bool:
    """Nut test straight from the adjugate: det A = 0 and adj A has no zero entry."""
    if g.n < 2:
        return False
    if exact_determinant(g) != 0:
        return False
    adj = adjugate(g)
    return all(x != 0 for row in adj for x in row)


@dataclass(frozen=True)
class Inertia:
    n_plus: int
    n_zero: int
    n_minus: int

    @property
    def order(self) -> int:
        return self.n_plus + self.n_zero + self.n_minus

    @property
    def delta_q(self) -> int:
        return self.n_plus - self.n_minus


def inertia_from_polynomial(coeffs: Sequence[int]) -> Inertia:
    """Eigenvalue sign counts of a real-rooted characteristic polynomial.

    Descartes' rule counts positive roots exactly when all roots are real.
    """
    n = len(coeffs) - 1
    n_zero = 0
    while n_zero < n and coeffs[n_zero] == 0:
        n_zero += 1
    signs = [c > 0 for c in coeffs if c != 0]
    n_plus = sum(1 for s, t in zip(signs, signs[1:]) if s != t)
    return Inertia(n_plus, n_zero, n - n_zero - n_plus)


def inertia(g: MatrixLike) -> Inertia:
    return inertia_from_polynomial(characteristic_polynomial(g))


def nbo_offset(i: Inertia) -> int:
    """k such that the zero eigenvalue sits at position ceil(n/2) + k (descending order)."""
    if i.n_zero != 1:
        raise NullityError(f"expected a single zero eigenvalue, found {i.n_zero}")
    n = i.order
    return i.n_plus + 1 - (n + 1) // 2


def r_ratio(v: Sequence[int]) -> Fraction:
    mags = [abs(x) for x in v]
    if not mags or min(mags) == 0:
        raise ValueError("kernel vector has a zero entry")
    return Fraction(max(mags), min(mags))
