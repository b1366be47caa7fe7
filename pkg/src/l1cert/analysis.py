"""Matrix-level recovery properties: coherence, spark, RSP of order K."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Sequence

from .l1opt import LinearSystem
from .rational import RationalMatrix, block, columns_independent, dot, rank, vector
from .rsp import certify_unique_l1, rsp_for_pattern, support_partition

ZERO = Fraction(0)
ONE = Fraction(1)


class ZeroColumn(ValueError):
    pass


@dataclass(frozen=True)
class CoherenceReport:
    """Squared mutual coherence, the maximising column pair, and the coherence order bound.

    ``order_bound`` is ``floor((1 + 1/mu) / 2)``: the largest ``K`` with
    ``(2K - 1)^2 mu^2 <= 1`` (capped at the column count).  ``strict_bound``
    is the largest ``K`` with ``(2K - 1) mu < 1``, the sparsity level below
    which recovery is actually guaranteed; the two differ only when
    ``(1 + 1/mu) / 2`` is an integer.
    """

    mu_squared: Fraction
    pair: tuple
    order_bound: int
    strict_bound: int


def mutual_coherence(A: RationalMatrix) -> CoherenceReport:
    cols = [A.column(j) for j in range(A.ncols)]
    norms = [dot(c, c) for c in cols]
    for j, nn in enumerate(norms):
        if nn == 0:
            raise ZeroColumn(f"column {j} is zero")
    best, pair = ZERO, None
    for i, j in combinations(range(A.ncols), 2):
        g = dot(cols[i], cols[j])
        r = g * g / (norms[i] * norms[j])
        if pair is None or r > best:
            best, pair = r, (i, j)
    n = A.ncols
    if best == 0:
        return CoherenceReport(best, pair, n, n)
    k = 0
    while k < n and (2 * k + 1) ** 2 * best <= 1:
        k += 1
    strict = 0
    while strict < n and (2 * strict + 1) ** 2 * best < 1:
        strict += 1
    return CoherenceReport(best, pair, k, strict)


def spark(A: RationalMatrix) -> int:
    """Smallest number of linearly dependent columns; ``ncols + 1`` if none are."""
    for k in range(1, A.ncols + 1):
        for S in combinations(range(A.ncols), k):
            if not columns_independent(A, S):
                return k
    return A.ncols + 1


def sign_patterns(n: int, size: int, canonical: bool = True) -> Iterator[tuple[tuple, tuple]]:
    """Disjoint ``(S1, S2)`` with ``|S1| + |S2| = size``.

    Order: supports in lexicographic order, then sign vectors with ``+``
    before ``-``.  With ``canonical`` the smallest index always sits in
    ``S1`` (the mirrored pattern is equivalent under ``eta -> -eta``).
    """
    for S in combinations(range(n), size):
        heads = [(1,)] if canonical else [(1,), (-1,)]
        for head in heads:
            for tail in product((1, -1), repeat=size - 1):
                signs = head + tail
                yield (tuple(i for i, s in zip(S, signs) if s > 0),
                       tuple(i for i, s in zip(S, signs) if s < 0))


@dataclass(frozen=True)
class OrderRspReport:
    K: int
    holds: bool
    failing_pair: tuple | None
    checked_pairs: int
    rank_condition: bool = True


def _check_K(A: RationalMatrix, K: int) -> None:
    if not 1 <= K <= A.ncols:
        raise ValueError(f"K must lie in [1, {A.ncols}], got {K}")


def rsp_order(A: RationalMatrix, K: int, strict: bool = False) -> OrderRspReport:
    """RSP of order K for ``A^T``.

    By default only patterns of size exactly ``K`` are solved (smaller
    patterns follow by nesting); ``strict`` checks every size ``1..K``.
    """
    _check_K(A, K)
    checked = 0
    for size in (range(1, K + 1) if strict else (K,)):
        for S1, S2 in sign_patterns(A.ncols, size):
            checked += 1
            if not rsp_for_pattern(A, S1, S2).holds:
                return OrderRspReport(K, False, (S1, S2), checked)
    return OrderRspReport(K, True, None, checked)


def weak_rsp_order(A: RationalMatrix, K: int) -> OrderRspReport:
    """Weak-RSP of order K: some K independent columns exist, and every sign
    pattern of size <= K on independent columns has an RSP witness."""
    _check_K(A, K)
    if rank(A) < K:
        return OrderRspReport(K, False, None, 0, rank_condition=False)
    checked = 0
    for size in range(1, K + 1):
        for S in combinations(range(A.ncols), size):
            if not columns_independent(A, S):
                continue
            for S1, S2 in _patterns_on(S):
                checked += 1
                if not rsp_for_pattern(A, S1, S2).holds:
                    return OrderRspReport(K, False, (S1, S2), checked)
    return OrderRspReport(K, True, None, checked)


def _patterns_on(S: tuple) -> Iterator[tuple[tuple, tuple]]:
    for tail in product((1, -1), repeat=len(S) - 1):
        signs = (1,) + tail
        yield (tuple(i for i, s in zip(S, signs) if s > 0),
               tuple(i for i, s in zip(S, signs) if s < 0))


def build_H_G(A: RationalMatrix, x: Sequence[Fraction]) -> tuple[RationalMatrix, RationalMatrix]:
    x = vector(x)
    if len(x) != A.ncols:
        raise ValueError(f"x has length {len(x)}, A has {A.ncols} columns")
    part = support_partition(x)
    p, q, m = len(part.plus), len(part.minus), A.nrows
    Ap, Am = A.columns(part.plus), A.columns(part.minus)
    ones = lambda k, s: RationalMatrix.from_rows([[s] * k], k)
    Z = RationalMatrix.zeros
    I = RationalMatrix.identity
    H = block([[Ap, Am], [ones(p, -ONE), ones(q, ONE)]])
    G = block([
        [-I(p), Z(p, q), -I(p), Z(p, q)],
        [Z(q, p), I(q), Z(q, p), -I(q)],
        [Ap, Am, Z(m, p), Z(m, q)],
        [Z(1, p), Z(1, q), ones(p, ONE), ones(q, ONE)],
    ])
    return H, G


@dataclass(frozen=True)
class RecoveryResult:
    all_recovered: bool
    counterexample: tuple | None
    probes: int


def uniform_recovery_oracle(A: RationalMatrix, K: int) -> RecoveryResult:
    """Certify recovery of every +-1 vector with at most K nonzeros, one probe at a time."""
    _check_K(A, K)
    n = A.ncols
    probes = 0
    for size in range(1, K + 1):
        for S in combinations(range(n), size):
            for signs in product((1, -1), repeat=size):
                x = [ZERO] * n
                for i, s in zip(S, signs):
                    x[i] = Fraction(s)
                x = tuple(x)
                probes += 1
                if not certify_unique_l1(LinearSystem(A, A.matvec(x)), x).is_unique:
                    return RecoveryResult(False, x, probes)
    return RecoveryResult(True, None, probes)
