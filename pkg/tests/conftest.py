from __future__ import annotations

import itertools
from pathlib import Path

import numpy as np
import pytest

from topagg import FullRanking, TopList, VotingProfile

DATA = Path(__file__).parent / "data"

SAMPLE_LISTS = [(1, [3, 5, 1, 7]), (2, [3, 1, 4, 5]), (3, [4, 1, 5, 2]), (4, [6, 1, 2, 3])]


@pytest.fixture
def sample() -> VotingProfile:
    return VotingProfile.from_lists(8, SAMPLE_LISTS)


@pytest.fixture
def sample_path() -> Path:
    return DATA / "sample.toplist"


def random_profile(
    rng: np.random.Generator,
    n: int,
    *,
    lists: tuple[int, int] = (1, 6),
    k: tuple[int, int] | None = None,
    weight_max: int = 4,
) -> VotingProfile:
    lo, hi = k if k is not None else (1, n)
    entries = []
    for _ in range(int(rng.integers(lists[0], lists[1] + 1))):
        size = int(rng.integers(lo, min(hi, n) + 1))
        ranked = rng.permutation(n)[:size]
        entries.append((int(rng.integers(1, weight_max + 1)), TopList(n, tuple(ranked.tolist()))))
    return VotingProfile(n, entries)


def brute_kendall(sigma: FullRanking, pi: TopList) -> int:
    """Straight from the definition: ordered pairs, infinite ranks for the unranked."""
    return sum(
        1
        for i in range(sigma.n)
        for j in range(sigma.n)
        if sigma.rank(i) > sigma.rank(j) and pi.rank(i) < pi.rank(j)
    )


def brute_optimum(p: VotingProfile):
    """Minimum over all permutations using per-list distances only."""
    best = None
    for perm in itertools.permutations(range(p.n)):
        sigma = FullRanking(perm)
        cost = sum(w * brute_kendall(sigma, t) for w, t in p.entries)
        if best is None or cost < best[1]:
            best = (sigma, cost)
    return best


# -- acceptance reporting ----------------------------------------------------

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; the verdict follows the test outcome."""
    entry = {"name": request.node.name, "detail": ""}

    def note(detail: str) -> None:
        entry["detail"] = detail

    yield note
    rep = getattr(request.node, "rep_call", None)
    passed = rep is not None and rep.passed
    _ACCEPTANCE.append((entry["name"], passed, entry["detail"]))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{verdict}] {name}" + (f"  ({detail})" if detail else ""))
