"""Top-lists, full rankings, voting profiles and the distances between them.

Candidates are 0-based integers internally. Everything that talks to the
outside world (``from_ids``/``ids`` helpers, the file format, the CLI) uses
1-based ids.

All costs are exact: weights are positive integers and every probability,
score or distance is a :class:`fractions.Fraction` whose denominator divides
the profile's total weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

INF = math.inf

# Above this total weight pairwise sums may overflow int64; fall back to
# Python ints in object arrays.
_INT64_SAFE = 1 << 62


class DimensionError(ValueError):
    """Two objects disagree on the number of candidates."""


class CapacityError(ValueError):
    """An exact routine was asked to handle more candidates than its cap."""


@dataclass(frozen=True)
class TopList:
    """A ranking of the first ``k`` candidates; everybody else is tied last.

    ``ranked[r - 1]`` is the candidate with rank ``r``. A top-list built by
    :func:`restrict` may be empty; everywhere else ``k >= 1``.
    """

    n: int
    ranked: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ranked", tuple(int(c) for c in self.ranked))
        if self.n < 1:
            raise ValueError(f"need at least one candidate, got n={self.n}")
        if len(set(self.ranked)) != len(self.ranked):
            raise ValueError(f"duplicate candidate in top-list {self.ranked}")
        for c in self.ranked:
            if not 0 <= c < self.n:
                raise ValueError(f"candidate {c} out of range for n={self.n}")

    @classmethod
    def from_ids(cls, n: int, ids: Iterable[int]) -> TopList:
        return cls(n, tuple(i - 1 for i in ids))

    @property
    def k(self) -> int:
        return len(self.ranked)

    @cached_property
    def _ranks(self) -> dict[int, int]:
        return {c: r for r, c in enumerate(self.ranked, start=1)}

    def rank(self, candidate: int) -> float | int:
        """Rank of ``candidate`` (1-based), or ``INF`` if it is not ranked."""
        return self._ranks.get(candidate, INF)

    def ids(self) -> list[int]:
        return [c + 1 for c in self.ranked]

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.ids())) + ";...]"


@dataclass(frozen=True)
class FullRanking:
    """A permutation of all candidates; ``order[r - 1]`` has rank ``r``."""

    order: tuple[int, ...]
    position: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        order = tuple(int(c) for c in self.order)
        n = len(order)
        if n < 1:
            raise ValueError("a full ranking needs at least one candidate")
        position = [0] * n
        seen = [False] * n
        for r, c in enumerate(order, start=1):
            if not 0 <= c < n or seen[c]:
                raise ValueError(f"not a permutation of 0..{n - 1}: {order}")
            seen[c] = True
            position[c] = r
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "position", tuple(position))

    @classmethod
    def from_ids(cls, ids: Iterable[int]) -> FullRanking:
        return cls(tuple(i - 1 for i in ids))

    @classmethod
    def identity(cls, n: int) -> FullRanking:
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.order)

    def rank(self, candidate: int) -> int:
        return self.position[candidate]

    def ids(self) -> list[int]:
        return [c + 1 for c in self.order]

    def __str__(self) -> str:
        return " ".join(map(str, self.ids()))


class VotingProfile:
    """Weighted multiset of top-lists over ``n`` candidates.

    ``p(pi)`` is ``weight / total_weight``. Weights must be positive integers.
    """

    def __init__(
        self,
        n: int,
        entries: Iterable[tuple[int, TopList]],
        *,
        _allow_empty: bool = False,
    ) -> None:
        entries = tuple((int(w), t) for w, t in entries)
        if not entries:
            raise ValueError("a voting profile needs at least one top-list")
        for w, t in entries:
            if w < 1:
                raise ValueError(f"weights must be positive integers, got {w}")
            if t.n != n:
                raise DimensionError(f"top-list over {t.n} candidates in a profile over {n}")
            if t.k == 0 and not _allow_empty:
                raise ValueError("empty top-list")
        self.n = n
        self.entries = entries
        self.total_weight = sum(w for w, _ in entries)

    @classmethod
    def from_lists(cls, n: int, lists: Iterable[tuple[int, Sequence[int]]]) -> VotingProfile:
        """Build from ``(weight, [1-based ids])`` pairs."""
        return cls(n, [(w, TopList.from_ids(n, ids)) for w, ids in lists])

    @classmethod
    def single(cls, ranking: FullRanking, weight: int = 1) -> VotingProfile:
        return cls(ranking.n, [(weight, TopList(ranking.n, ranking.order))])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VotingProfile):
            return NotImplemented
        return self.n == other.n and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.n, self.entries))

    def __repr__(self) -> str:
        body = ", ".join(f"{w}:{t}" for w, t in self.entries)
        return f"VotingProfile(n={self.n}, {body})"

    @property
    def max_length(self) -> int:
        return max(t.k for _, t in self.entries)

    def probability(self, weight: int) -> Fraction:
        return Fraction(weight, self.total_weight)

    @cached_property
    def pair_weights(self) -> np.ndarray:
        return pair_weights(self)


def pair_weights(p: VotingProfile) -> np.ndarray:
    """``before[i, j]`` = total weight of lists with ``pi_i < pi_j``.

    Pairs where ``j`` is unranked and ``i`` is ranked count; pairs where both
    are unranked do not. Memory is ``n**2``, so this is for moderate ``n``.
    """
    dtype = np.int64 if p.total_weight < _INT64_SAFE else object
    before = np.zeros((p.n, p.n), dtype=dtype)
    for w, t in p.entries:
        ranked = list(t.ranked)
        for r, c in enumerate(ranked):
            row = before[c]
            row += w
            row[ranked[: r + 1]] -= w
    return before


def _count_inversions(values: list[int]) -> int:
    """Pairs ``a < b`` with ``values[a] > values[b]`` (merge sort)."""
    n = len(values)
    if n < 2:
        return 0
    buf = list(values)
    tmp = [0] * n
    inv = 0
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if buf[i] <= buf[j]:
                    tmp[k] = buf[i]
                    i += 1
                else:
                    tmp[k] = buf[j]
                    inv += mid - i
                    j += 1
                k += 1
            tmp[k : k + mid - i] = buf[i:mid]
            k += mid - i
            tmp[k : k + hi - j] = buf[j:hi]
        buf, tmp = tmp, buf
        width *= 2
    return inv


def _check_dims(sigma: FullRanking, n: int) -> None:
    if sigma.n != n:
        raise DimensionError(f"ranking over {sigma.n} candidates, expected {n}")


def kendall_list(sigma: FullRanking, pi: TopList) -> int:
    """Generalized Kendall tau distance between a full ranking and a top-list.

    Counts pairs ``(i, j)`` with ``sigma_i > sigma_j`` and ``pi_i < pi_j``.
    Runs in ``O(k log k)`` given the ranking's position table: inversions
    among the ``k`` ranked candidates, plus, for each ranked candidate, the
    unranked candidates that ``sigma`` places ahead of it.
    """
    _check_dims(sigma, pi.n)
    pos = sigma.position
    s = [pos[c] for c in pi.ranked]
    total = _count_inversions(s)
    for t, r in enumerate(sorted(s)):
        total += r - 1 - t
    return total


def footrule_list(sigma: FullRanking, pi: TopList) -> int:
    """Generalized Spearman footrule ``2 * sum (sigma_i - pi_i)`` over ``pi_i < sigma_i``."""
    _check_dims(sigma, pi.n)
    pos = sigma.position
    return 2 * sum(pos[c] - r for r, c in enumerate(pi.ranked, start=1) if r < pos[c])


def linear_extension(pi: TopList, sigma: FullRanking) -> FullRanking:
    """Complete ``pi`` into a full ranking, ordering its tail as ``sigma`` does."""
    _check_dims(sigma, pi.n)
    ranked = set(pi.ranked)
    tail = [c for c in sigma.order if c not in ranked]
    return FullRanking(pi.ranked + tuple(tail))


def kendall_profile(sigma: FullRanking, p: VotingProfile, *, via: str = "lists") -> Fraction:
    """Expected distance ``K(sigma, p)`` as an exact fraction.

    ``via="lists"`` sums weighted per-list distances; ``via="pairs"`` reads
    the pairwise preference matrix. Both give the same value.
    """
    _check_dims(sigma, p.n)
    if via == "lists":
        total = sum(w * kendall_list(sigma, t) for w, t in p.entries)
    elif via == "pairs":
        order = np.asarray(sigma.order)
        m = p.pair_weights[np.ix_(order, order)]
        total = int(np.tril(m, -1).sum())
    else:
        raise ValueError(f"unknown method {via!r}")
    return Fraction(total, p.total_weight)


def footrule_profile(sigma: FullRanking, p: VotingProfile) -> Fraction:
    _check_dims(sigma, p.n)
    return Fraction(sum(w * footrule_list(sigma, t) for w, t in p.entries), p.total_weight)


@dataclass(frozen=True)
class CandidateStats:
    """Per-candidate weight totals, in weight units.

    ``score_weight[i]`` is the weight of lists ranking ``i``;
    ``rank_sum[i]`` is ``sum_r r * weight(pi_i = r)``.
    """

    total_weight: int
    score_weight: tuple[int, ...]
    rank_sum: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.score_weight)

    def score(self, i: int) -> Fraction:
        return Fraction(self.score_weight[i], self.total_weight)

    def avg_rank(self, i: int) -> Fraction | None:
        """Average rank given ``i`` is ranked; ``None`` for zero-score candidates."""
        sw = self.score_weight[i]
        if sw == 0:
            return None
        return Fraction(self.rank_sum[i], sw)

    def scores(self) -> list[Fraction]:
        return [self.score(i) for i in range(self.n)]

    def avg_ranks(self) -> list[Fraction | None]:
        return [self.avg_rank(i) for i in range(self.n)]

    def alpha(self) -> Fraction | None:
        """Ratio of the largest to the smallest nonzero score."""
        nonzero = [s for s in self.score_weight if s > 0]
        if not nonzero:
            return None
        return Fraction(max(nonzero), min(nonzero))

    def avg_rank_key(self, i: int) -> tuple[float, Fraction, int]:
        """Sort key ordering ranked candidates by exact average rank, then index.

        Correctly rounded int division is monotone, so the float decides
        almost every comparison and the fraction only breaks float ties.
        """
        sw = self.score_weight[i]
        return (self.rank_sum[i] / sw, Fraction(self.rank_sum[i], sw), i)


def stats(p: VotingProfile) -> CandidateStats:
    sw = [0] * p.n
    rs = [0] * p.n
    for w, t in p.entries:
        for r, c in enumerate(t.ranked, start=1):
            sw[c] += w
            rs[c] += r * w
    return CandidateStats(p.total_weight, tuple(sw), tuple(rs))


def rank_weights(p: VotingProfile) -> list[list[int]]:
    """Dense ``rank_weight[i][r - 1]`` = weight of lists with ``pi_i = r``."""
    table = [[0] * p.n for _ in range(p.n)]
    for w, t in p.entries:
        for r, c in enumerate(t.ranked):
            table[c][r] += w
    return table


def restrict(
    p: VotingProfile,
    subset: Sequence[int],
    *,
    drop_empty: bool = False,
) -> tuple[VotingProfile, tuple[int, ...]]:
    """Restrict ``p`` to ``subset``; local candidate ``a`` is ``subset[a]``.

    Each list keeps the subset members in their original order. Lists left
    empty keep their weight (so probabilities match the parent profile)
    unless ``drop_empty`` is set. Pairwise weights among subset members are
    unchanged either way.
    """
    subset = tuple(int(c) for c in subset)
    if not subset:
        raise ValueError("cannot restrict to an empty subset")
    local = {}
    for a, c in enumerate(subset):
        if not 0 <= c < p.n:
            raise ValueError(f"candidate {c} out of range for n={p.n}")
        if c in local:
            raise ValueError(f"duplicate candidate {c} in subset")
        local[c] = a
    m = len(subset)
    entries = []
    for w, t in p.entries:
        kept = tuple(local[c] for c in t.ranked if c in local)
        if kept or not drop_empty:
            entries.append((w, TopList(m, kept)))
    if not entries:
        raise ValueError("no top-list ranks any candidate of the subset")
    return VotingProfile(m, entries, _allow_empty=True), subset
