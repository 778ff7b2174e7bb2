"""Approximation algorithms for top-list aggregation.

Every algorithm takes a :class:`~topagg.core.VotingProfile` and returns a
:class:`~topagg.core.FullRanking` over all of its candidates. Candidates that
no list ranks (zero score) always go last, in index order, and every other
tie is broken by ascending candidate index.

Randomized algorithms take an explicit integer seed; there is no global
random state.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .core import (
    CandidateStats,
    CapacityError,
    FullRanking,
    VotingProfile,
    _INT64_SAFE,
    rank_weights,
    restrict,
    stats,
)
from .exact import SUBSET_DP_CAP, reorder_prefix_optimally, subset_dp_order
from .matching import min_cost_assignment

log = logging.getLogger(__name__)

# Partition values this close to an integer are treated as lying on it.
BOUNDARY_TOL = 1e-12


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 1 << 64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def _unranked_last(st: CandidateStats, head: list[int]) -> FullRanking:
    tail = [i for i in range(st.n) if st.score_weight[i] == 0]
    return FullRanking(tuple(head + tail))


def _by_avg_rank(st: CandidateStats, members) -> list[int]:
    return sorted(members, key=st.avg_rank_key)


# -- Footrule+ ---------------------------------------------------------------


def footrule_costs(p: VotingProfile) -> np.ndarray:
    """Cost (in weight units) of putting candidate ``i`` at rank ``j + 1``.

    ``C[i, j] = sum_{r <= j+1} (j + 1 - r) * weight(pi_i = r)``, computed from
    prefix sums as ``(j+1) * A - B`` with ``A`` the cumulative weight and
    ``B`` the cumulative rank-weighted weight.
    """
    n = p.n
    safe = p.total_weight * (n + 1) * (n + 1) * 4 * (n + 1) < _INT64_SAFE
    w = np.array(rank_weights(p), dtype=np.int64 if safe else object).reshape(n, n)
    ranks = np.arange(1, n + 1, dtype=w.dtype)
    cum_w = np.cumsum(w, axis=1)
    cum_rw = np.cumsum(w * ranks, axis=1)
    return cum_w * ranks - cum_rw


def footrule_plus(p: VotingProfile) -> FullRanking:
    """Assign candidates to ranks minimizing the generalized footrule.

    Cubic in the number of candidates; a 2-approximation.
    """
    assign, _ = min_cost_assignment(footrule_costs(p))
    order = [0] * p.n
    for i, j in enumerate(assign):
        order[j] = i
    # Zero-score rows are all zero, so the matching may scatter them. Moving
    # ranked candidates forward never costs more since C(i, j) grows with j.
    st = stats(p)
    return _unranked_last(st, [i for i in order if st.score_weight[i] > 0])


# -- RandomSort --------------------------------------------------------------


def random_list_order(p: VotingProfile, seed: int) -> list[int]:
    """Entry indices of ``p`` sorted by their exponential clocks.

    Entry ``e`` draws ``X_e = -ln(U) / p(e)`` with ``U`` uniform on ``(0, 1]``;
    equal clocks keep entry order.
    """
    rng = np.random.default_rng(_check_seed(seed))
    u = 1.0 - rng.random(len(p.entries))
    rate = np.array([w for w, _ in p.entries], dtype=float) / p.total_weight
    clocks = -np.log(u) / rate
    return np.argsort(clocks, kind="stable").tolist()


def sort_by_list_order(p: VotingProfile, list_order) -> FullRanking:
    """Concatenate lists in ``list_order``, skipping candidates already placed.

    This is the same as sorting candidates by (clock of the first list that
    ranks them, rank in that list). Unranked candidates follow by index.
    """
    placed = [False] * p.n
    order = []
    for e in list_order:
        for c in p.entries[e][1].ranked:
            if not placed[c]:
                placed[c] = True
                order.append(c)
    order.extend(i for i in range(p.n) if not placed[i])
    return FullRanking(tuple(order))


def random_sort(p: VotingProfile, seed: int) -> FullRanking:
    """Randomized 2-approximation driven by one exponential clock per list."""
    return sort_by_list_order(p, random_list_order(p, seed))


# -- Borda+ ------------------------------------------------------------------


def borda_plus(p: VotingProfile) -> FullRanking:
    """Sort ranked candidates by increasing average rank.

    A ``(4 alpha + 2)``-approximation where ``alpha`` is
    ``stats(p).alpha()``; not a constant-factor approximation in general.
    """
    st = stats(p)
    ranked = [i for i in range(p.n) if st.score_weight[i] > 0]
    return _unranked_last(st, _by_avg_rank(st, ranked))


# -- score partition ---------------------------------------------------------


@dataclass(frozen=True)
class PartitionParams:
    """Parameters of the shifted logarithmic bucketing by score.

    ``u`` overrides the seed; otherwise ``u`` is the first 53-bit uniform of
    ``numpy.random.default_rng(seed)``.
    """

    eta: Fraction = Fraction(1)
    u: float | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "eta", Fraction(self.eta))
        if self.eta <= 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if self.u is not None and not 0.0 <= self.u < 1.0:
            raise ValueError(f"u must lie in [0, 1), got {self.u}")

    def draw_u(self) -> float:
        if self.u is not None:
            return float(self.u)
        if self.seed is None:
            raise ValueError("need either an explicit u or a seed")
        return float(np.random.default_rng(_check_seed(self.seed)).random())


def interval_index(score: Fraction | float, u: float, eta: Fraction | float) -> int:
    """``floor(u - eta ln(score))`` for a positive score.

    Values within ``BOUNDARY_TOL`` of an integer go to the lower index, and
    the index never drops below 0.
    """
    x = u - float(eta) * math.log(score)
    near = round(x)
    t = near - 1 if abs(x - near) <= BOUNDARY_TOL else math.floor(x)
    return max(int(t), 0)


def partition_by_score(
    st: CandidateStats,
    params: PartitionParams,
) -> list[tuple[int | float, list[int]]]:
    """Bucket candidates by score into ``[(t, members), ...]``.

    Buckets come in increasing ``t`` (decreasing score); zero-score candidates
    form the final bucket with ``t = math.inf``. Empty buckets are left out.
    Members are listed by index.
    """
    u = params.draw_u()
    buckets: dict[int | float, list[int]] = {}
    W = st.total_weight
    for i in range(st.n):
        sw = st.score_weight[i]
        t = interval_index(sw / W, u, params.eta) if sw > 0 else math.inf
        buckets.setdefault(t, []).append(i)
    return sorted(buckets.items(), key=lambda kv: kv[0])


def score_then_borda(p: VotingProfile, params: PartitionParams) -> FullRanking:
    """Bucket by score, then sort each bucket by average rank.

    With ``eta = 1`` the expected cost is within ``8e + 4`` of optimal.
    """
    st = stats(p)
    order: list[int] = []
    for t, members in partition_by_score(st, params):
        order.extend(members if t == math.inf else _by_avg_rank(st, members))
    return FullRanking(tuple(order))


# -- Score-then-Adjust -------------------------------------------------------


def adjust_prefix_length(k: int, epsilon: Fraction, n: int) -> int:
    """``ceil((1 + 1/eps)(k - 1))`` clamped to ``[1, n]``."""
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    m = math.ceil((1 + 1 / epsilon) * (k - 1))
    return min(max(m, 1), n)


def score_order(st: CandidateStats) -> FullRanking:
    """Non-increasing score; ties by increasing average rank, then index."""

    def key(i: int):
        sw = st.score_weight[i]
        if sw == 0:
            return (0, 0.0, Fraction(0), i)
        return (-sw,) + st.avg_rank_key(i)

    return FullRanking(tuple(sorted(range(st.n), key=key)))


def score_then_adjust(
    p: VotingProfile,
    epsilon: Fraction,
    *,
    cap: int = SUBSET_DP_CAP,
) -> FullRanking:
    """Sort by score, then optimally reorder the first ``m`` candidates.

    ``k`` is the longest list in ``p``. The result is within ``1 + epsilon``
    of optimal, in ``O(n log n + m 2^m)`` time.
    """
    m = adjust_prefix_length(p.max_length, epsilon, p.n)
    if m > cap:
        raise CapacityError(
            f"epsilon={epsilon} with k={p.max_length} needs a prefix of {m}, above the cap of {cap}"
        )
    return reorder_prefix_optimally(p, score_order(stats(p)), m, cap=cap)


# -- Score-then-PTAS ---------------------------------------------------------


@dataclass(frozen=True)
class IntervalSolver:
    """Orders the candidates of one score bucket.

    ``solve`` receives the profile restricted to the bucket and returns a
    ranking of its local candidates. ``quality`` is ``"exact"``, ``"borda"``
    or ``"external"`` (a black-box approximation scheme).
    """

    solve: Callable[[VotingProfile], FullRanking]
    quality: str

    def __post_init__(self) -> None:
        if self.quality not in ("exact", "borda", "external"):
            raise ValueError(f"unknown solver quality {self.quality!r}")


def _exact_solve(q: VotingProfile, cap: int = SUBSET_DP_CAP) -> FullRanking:
    if q.n > cap:
        raise CapacityError(f"interval of {q.n} candidates exceeds the subset DP cap of {cap}")
    order, _ = subset_dp_order(q.pair_weights)
    return FullRanking(order)


EXACT_SOLVER = IntervalSolver(_exact_solve, "exact")
BORDA_SOLVER = IntervalSolver(borda_plus, "borda")


@dataclass
class PtasReport:
    """What :func:`score_then_ptas` did, for diagnostics."""

    u: float
    eta: Fraction
    buckets: list[tuple[int | float, list[int]]]
    qualities: list[str] = field(default_factory=list)

    @property
    def quality(self) -> str:
        for q in ("borda", "external"):
            if q in self.qualities:
                return q
        return "exact"

    @property
    def bound(self) -> float:
        """Proven factor on the expected cost for the solvers actually used."""
        eta = float(self.eta)
        if self.quality == "exact":
            return 1 + eta
        if self.quality == "external":
            return (1 + eta) ** 2
        # within a bucket scores differ by at most a factor exp(1/eta)
        alpha = math.exp(1 / eta)
        return (1 + eta) * (4 * alpha + 2)


def score_then_ptas(
    p: VotingProfile,
    epsilon: Fraction,
    seed: int | None = None,
    solver: IntervalSolver | None = None,
    *,
    u: float | None = None,
    cap: int = SUBSET_DP_CAP,
    report: bool = False,
) -> FullRanking | tuple[FullRanking, PtasReport]:
    """Bucket by score with ``eta = epsilon / 3`` and solve each bucket.

    Without an explicit ``solver`` each bucket is solved exactly when it has
    at most ``cap`` candidates and by Borda+ otherwise (logged as a quality
    downgrade). Zero-score candidates go last in index order. With
    ``report=True`` also returns a :class:`PtasReport`.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    params = PartitionParams(eta=epsilon / 3, u=u, seed=seed)
    st = stats(p)
    drawn = params.draw_u()
    buckets = partition_by_score(st, PartitionParams(eta=params.eta, u=drawn))
    info = PtasReport(drawn, params.eta, buckets)
    order: list[int] = []
    for t, members in buckets:
        if t == math.inf or len(members) == 1:
            order.extend(members)
            continue
        chosen = solver
        if chosen is None:
            if len(members) <= cap:
                chosen = EXACT_SOLVER
            else:
                log.warning(
                    "bucket of %d candidates exceeds the exact cap %d; using Borda+",
                    len(members),
                    cap,
                )
                chosen = BORDA_SOLVER
        sub, index = restrict(p, members)
        local = chosen.solve(sub)
        if sorted(local.order) != list(range(len(members))):
            raise ValueError("interval solver did not return a permutation of its bucket")
        order.extend(index[a] for a in local.order)
        info.qualities.append(chosen.quality)
    ranking = FullRanking(tuple(order))
    return (ranking, info) if report else ranking
