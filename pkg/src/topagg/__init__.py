"""Aggregating weighted top-lists into one full ranking.

The objective is the generalized Kendall tau distance: pairs tied in an
input list (both unranked) cost nothing.
"""

from .algorithms import (
    BORDA_SOLVER,
    EXACT_SOLVER,
    IntervalSolver,
    PartitionParams,
    borda_plus,
    footrule_plus,
    partition_by_score,
    random_sort,
    score_then_adjust,
    score_then_borda,
    score_then_ptas,
)
from .core import (
    CandidateStats,
    CapacityError,
    DimensionError,
    FullRanking,
    TopList,
    VotingProfile,
    footrule_list,
    kendall_list,
    kendall_profile,
    pair_weights,
    restrict,
    stats,
)
from .exact import optimal_bruteforce, optimal_subset_dp, reorder_prefix_optimally
from .io import GeneratorSpec, generate, parse_profile, serialize_profile
from .matching import min_cost_assignment

__all__ = [
    "BORDA_SOLVER",
    "EXACT_SOLVER",
    "CandidateStats",
    "CapacityError",
    "DimensionError",
    "FullRanking",
    "GeneratorSpec",
    "IntervalSolver",
    "PartitionParams",
    "TopList",
    "VotingProfile",
    "borda_plus",
    "footrule_list",
    "footrule_plus",
    "generate",
    "kendall_list",
    "kendall_profile",
    "min_cost_assignment",
    "optimal_bruteforce",
    "optimal_subset_dp",
    "pair_weights",
    "parse_profile",
    "partition_by_score",
    "random_sort",
    "reorder_prefix_optimally",
    "restrict",
    "score_then_adjust",
    "score_then_borda",
    "score_then_ptas",
    "serialize_profile",
    "stats",
]
