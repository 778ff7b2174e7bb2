"""Profile files, instance generators and output formatting.

A profile file looks like::

    # optional comments
    candidates 8
    1: 3 5 1 7
    2: 3 1 4 5

Each entry line is ``<weight>: <ids>`` with 1-based, distinct ids. Weights
are positive integers; fractional probabilities are written as integer
multiplicities over a common denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import FullRanking, TopList, VotingProfile


class ProfileParseError(ValueError):
    """Malformed profile text. ``line`` is 1-based (0 when not line-specific)."""

    def __init__(self, message: str, line: int = 0) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class HeaderError(ProfileParseError):
    pass


class EntryFormatError(ProfileParseError):
    pass


class WeightError(ProfileParseError):
    pass


class CandidateRangeError(ProfileParseError):
    pass


class DuplicateCandidateError(ProfileParseError):
    pass


def parse_profile(text: str) -> VotingProfile:
    n = None
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "candidates":
                raise HeaderError(f"expected 'candidates <n>', got {line!r}", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise HeaderError(f"candidate count is not an integer: {parts[1]!r}", lineno) from None
            if n < 1:
                raise HeaderError(f"need at least one candidate, got {n}", lineno)
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise EntryFormatError(f"expected '<weight>: <ids>', got {line!r}", lineno)
        try:
            weight = int(head.strip())
        except ValueError:
            raise WeightError(f"weight is not an integer: {head.strip()!r}", lineno) from None
        if weight < 1:
            raise WeightError(f"weight must be positive, got {weight}", lineno)
        try:
            ids = [int(tok) for tok in body.split()]
        except ValueError:
            raise EntryFormatError(f"candidate ids must be integers: {body.strip()!r}", lineno) from None
        if not ids:
            raise EntryFormatError("a top-list must rank at least one candidate", lineno)
        seen = set()
        for c in ids:
            if not 1 <= c <= n:
                raise CandidateRangeError(f"candidate {c} outside [1, {n}]", lineno)
            if c in seen:
                raise DuplicateCandidateError(f"candidate {c} appears twice", lineno)
            seen.add(c)
        entries.append((weight, TopList.from_ids(n, ids)))
    if n is None:
        raise HeaderError("missing 'candidates <n>' header")
    if not entries:
        raise ProfileParseError("profile has no top-lists")
    return VotingProfile(n, entries)


def serialize_profile(p: VotingProfile) -> str:
    lines = [f"candidates {p.n}"]
    lines += [f"{w}: " + " ".join(map(str, t.ids())) for w, t in p.entries]
    return "\n".join(lines) + "\n"


def read_profile(path) -> VotingProfile:
    with open(path, encoding="utf-8") as fh:
        return parse_profile(fh.read())


def write_profile(p: VotingProfile, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_profile(p))


def format_ranking(sigma: FullRanking) -> str:
    return " ".join(map(str, sigma.ids()))


def parse_ranking(text: str, n: int) -> FullRanking:
    """Parse 1-based space (or comma) separated ids into a full ranking."""
    try:
        ids = [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise ValueError(f"ranking must be integers: {text!r}") from None
    if sorted(ids) != list(range(1, n + 1)):
        raise ValueError(f"ranking is not a permutation of 1..{n}: {text!r}")
    return FullRanking.from_ids(ids)


def format_decimal(x: Fraction, digits: int = 6) -> str:
    """Round to ``digits`` decimals and drop trailing zeros: 51/10 -> ``5.1``."""
    scaled = round(Fraction(x) * 10**digits)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    frac_s = str(frac).rjust(digits, "0").rstrip("0")
    return f"{sign}{whole}.{frac_s}" if frac_s else f"{sign}{whole}"


def format_cost(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator} ({format_decimal(x)})"


# -- generators --------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorSpec:
    """Random profile recipe.

    ``uniform``: each list ranks ``k`` candidates drawn uniformly without
    replacement, in uniform random order.

    ``planted``: hidden order is the identity. Each list picks ``k``
    candidates one at a time, the ``j``-th remaining (by hidden rank) with
    probability proportional to ``decay**j``, sorts them by hidden rank and
    then swaps each adjacent pair with probability ``phi`` in one pass. This
    is a test-corpus model, not a model from the literature.

    ``k`` is an int or an inclusive ``(low, high)`` range drawn per list.
    """

    model: str
    n: int
    k: int | tuple[int, int]
    list_count: int
    weight_max: int = 1
    phi: float | None = None
    seed: int = 0
    decay: float = 0.7

    def __post_init__(self) -> None:
        if self.model not in ("uniform", "planted"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        lo, hi = self.k_range
        if not 1 <= lo <= hi:
            raise ValueError(f"bad list length {self.k}")
        if hi > self.n:
            raise ValueError(f"list length {hi} exceeds n={self.n}")
        if self.list_count < 1:
            raise ValueError(f"need at least one list, got {self.list_count}")
        if self.weight_max < 1:
            raise ValueError(f"weight_max must be positive, got {self.weight_max}")
        if self.model == "planted":
            if self.phi is None:
                raise ValueError("the planted model needs phi")
            if not 0.0 <= self.phi <= 1.0:
                raise ValueError(f"phi must lie in [0, 1], got {self.phi}")
            if not 0.0 < self.decay <= 1.0:
                raise ValueError(f"decay must lie in (0, 1], got {self.decay}")

    @property
    def k_range(self) -> tuple[int, int]:
        if isinstance(self.k, tuple):
            return self.k
        return (self.k, self.k)


def _planted_list(rng: np.random.Generator, n: int, k: int, phi: float, decay: float) -> list[int]:
    remaining = list(range(n))
    chosen = []
    for _ in range(k):
        w = decay ** np.arange(len(remaining), dtype=float)
        j = int(rng.choice(len(remaining), p=w / w.sum()))
        chosen.append(remaining.pop(j))
    chosen.sort()
    for a in range(k - 1):
        if rng.random() < phi:
            chosen[a], chosen[a + 1] = chosen[a + 1], chosen[a]
    return chosen


def generate(spec: GeneratorSpec) -> VotingProfile:
    rng = np.random.default_rng(spec.seed)
    lo, hi = spec.k_range
    entries = []
    for _ in range(spec.list_count):
        k = int(rng.integers(lo, hi + 1))
        if spec.model == "uniform":
            ranked = rng.choice(spec.n, size=k, replace=False).tolist()
        else:
            ranked = _planted_list(rng, spec.n, k, spec.phi, spec.decay)
        weight = int(rng.integers(1, spec.weight_max + 1))
        entries.append((weight, TopList(spec.n, tuple(ranked))))
    return VotingProfile(spec.n, entries)
