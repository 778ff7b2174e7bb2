"""Exact optimal aggregation for small instances.

Two independent routes to the optimum: enumerating all permutations, and a
dynamic program over subsets. Both break ties towards the lexicographically
smallest candidate order, so they return the same ranking, not just the
same cost.

The subset program is also what reorders a prefix of a ranking in
score-then-adjust.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import CapacityError, FullRanking, VotingProfile, _INT64_SAFE, restrict

BRUTEFORCE_CAP = 8
SUBSET_DP_CAP = 24


def _dtype_for(before: np.ndarray) -> type:
    m = before.shape[0]
    if before.dtype != object and int(before.max(initial=0)) * (m * m + 1) < _INT64_SAFE:
        return np.int64
    return object


@lru_cache(maxsize=32)
def _permutations(m: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(m))), dtype=np.intp).reshape(-1, m)


def bruteforce_order(before: np.ndarray) -> tuple[list[int], int]:
    """Optimal order for a pairwise weight matrix by trying every permutation.

    ``before[a, b]`` is the weight of lists placing ``a`` ahead of ``b``.
    Returns the lexicographically first optimal order and its cost in weight
    units.
    """
    m = before.shape[0]
    before = before.astype(_dtype_for(before))
    perms = _permutations(m)
    cost = np.zeros(len(perms), dtype=before.dtype)
    for a in range(m):
        for b in range(a + 1, m):
            # the candidate placed later at b beats the one at a
            cost += before[perms[:, b], perms[:, a]]
    best = int(np.argmin(cost))
    return perms[best].tolist(), int(cost[best])


@lru_cache(maxsize=4)
def _layers(m: int) -> list[np.ndarray]:
    size = 1 << m
    idx = np.arange(size, dtype=np.int64)
    pop = np.zeros(size, dtype=np.int8)
    for b in range(m):
        pop += ((idx >> b) & 1).astype(np.int8)
    order = np.argsort(pop, kind="stable")
    bounds = np.searchsorted(pop[order], np.arange(m + 2))
    return [order[bounds[k] : bounds[k + 1]] for k in range(m + 1)]


def _subset_sums(column: np.ndarray, bits: int, offset: int) -> np.ndarray:
    """``out[x] = sum(column[offset + b] for b set in x)`` for ``x < 2**bits``."""
    out = np.zeros(1 << bits, dtype=column.dtype)
    for b in range(bits):
        out[1 << b : 1 << (b + 1)] = out[: 1 << b] + column[offset + b]
    return out


def subset_dp_order(before: np.ndarray) -> tuple[list[int], int]:
    """Optimal order for a pairwise weight matrix by dynamic programming.

    ``dp[S]`` is the cheapest internal cost of the candidates in bitmask
    ``S``. Choosing ``c`` to go first among ``S`` costs every list that puts
    some other member of ``S`` ahead of ``c``:
    ``dp[S] = min_c dp[S - c] + sum_{s in S - c} before[s, c]``.
    Keeping the smallest ``c`` on ties makes the read-out lexicographically
    smallest. Time ``O(m 2^m)`` (vectorized per popcount layer).
    """
    m = before.shape[0]
    dtype = _dtype_for(before)
    before = before.astype(dtype)
    lo_bits = m // 2
    hi_bits = m - lo_bits
    lo_mask = (1 << lo_bits) - 1
    # sum_{s in T} before[s, c] = low-half table + high-half table
    lo_tab = [_subset_sums(before[:, c], lo_bits, 0) for c in range(m)]
    hi_tab = [_subset_sums(before[:, c], hi_bits, lo_bits) for c in range(m)]

    size = 1 << m
    dp = np.zeros(size, dtype=dtype)
    first = np.full(size, -1, dtype=np.int8)
    layers = _layers(m)
    for sets in layers[1:]:
        best = None
        arg = np.full(len(sets), -1, dtype=np.int8)
        for c in range(m):
            has = np.nonzero((sets >> c) & 1)[0]
            rest = sets[has] ^ (1 << c)
            val = dp[rest] + lo_tab[c][rest & lo_mask] + hi_tab[c][rest >> lo_bits]
            if best is None:
                best = np.zeros(len(sets), dtype=dtype)
                best[has] = val
                arg[has] = c
                continue
            fresh = arg[has] < 0
            better = fresh | (val < best[has])
            pos = has[better]
            best[pos] = val[better]
            arg[pos] = c
        dp[sets] = best
        first[sets] = arg

    order = []
    s = size - 1
    while s:
        c = int(first[s])
        order.append(c)
        s ^= 1 << c
    return order, int(dp[size - 1])


def optimal_bruteforce(p: VotingProfile, *, cap: int = BRUTEFORCE_CAP) -> tuple[FullRanking, Fraction]:
    """Exact optimum by enumerating all ``n!`` rankings."""
    if p.n > cap:
        raise CapacityError(f"brute force is capped at {cap} candidates, got {p.n}")
    order, cost = bruteforce_order(p.pair_weights)
    return FullRanking(order), Fraction(cost, p.total_weight)


def optimal_subset_dp(p: VotingProfile, *, cap: int = SUBSET_DP_CAP) -> tuple[FullRanking, Fraction]:
    """Exact optimum by dynamic programming over the ``2^n`` subsets."""
    if p.n > cap:
        raise CapacityError(f"subset DP is capped at {cap} candidates, got {p.n}")
    order, cost = subset_dp_order(p.pair_weights)
    return FullRanking(order), Fraction(cost, p.total_weight)


def reorder_prefix_optimally(
    p: VotingProfile,
    sigma: FullRanking,
    m: int,
    *,
    cap: int = SUBSET_DP_CAP,
) -> FullRanking:
    """Best reordering of the first ``m`` candidates of ``sigma``.

    Only pairs inside the prefix change relative order, so the restricted
    profile on the prefix candidates decides the optimum.
    """
    if not 1 <= m <= sigma.n:
        raise ValueError(f"prefix length must be in [1, {sigma.n}], got {m}")
    if sigma.n != p.n:
        raise ValueError(f"ranking over {sigma.n} candidates, profile over {p.n}")
    if m > cap:
        raise CapacityError(f"prefix of {m} candidates exceeds the subset DP cap of {cap}")
    if m == 1:
        return sigma
    prefix = sorted(sigma.order[:m])
    sub, index = restrict(p, prefix)
    local, _ = subset_dp_order(sub.pair_weights)
    return FullRanking(tuple(index[a] for a in local) + sigma.order[m:])
