"""Minimum-cost perfect matching on a square integer cost matrix.

Kuhn-Munkres with row/column potentials, ``O(n^3)``. Rows are inserted in
index order and every scan keeps the lowest column index among equal
reduced costs, so the returned optimum is deterministic.

Costs are exact integers. When every intermediate value provably fits in
int64 the column scans are vectorized with numpy; otherwise the same steps
run on Python ints. Both paths make identical choices.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import DimensionError

_INT64_LIMIT = 1 << 60


def _as_rows(cost) -> list[list[int]]:
    rows = [[int(x) for x in row] for row in cost]
    n = len(rows)
    if n == 0:
        raise DimensionError("empty cost matrix")
    for row in rows:
        if len(row) != n:
            raise DimensionError(f"cost matrix is not square ({n} rows, a row of {len(row)})")
    return rows


def _hungarian_python(c: list[list[int]]) -> list[int]:
    n = len(c)
    inf = 1 + 2 * (n + 1) * max(max(abs(x) for x in row) for row in c)
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    owner = [0] * (n + 1)  # owner[j]: 1-based row matched to column j
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        owner[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = owner[j0]
            row = c[i0 - 1]
            ui0 = u[i0]
            delta = inf
            j1 = 0
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[owner[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1
    assign = [0] * n
    for j in range(1, n + 1):
        assign[owner[j] - 1] = j - 1
    return assign


def _hungarian_numpy(c: np.ndarray) -> list[int]:
    n = c.shape[0]
    inf = np.int64(_INT64_LIMIT)
    # Column 0 is the virtual start column; padding keeps indices 1-based.
    cost = np.zeros((n + 1, n + 1), dtype=np.int64)
    cost[1:, 1:] = c
    u = np.zeros(n + 1, dtype=np.int64)
    v = np.zeros(n + 1, dtype=np.int64)
    owner = np.zeros(n + 1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        owner[0] = i
        j0 = 0
        minv = np.full(n + 1, inf, dtype=np.int64)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = owner[j0]
            cur = cost[i0] - u[i0] - v
            better = (cur < minv) & ~used
            minv[better] = cur[better]
            way[better] = j0
            masked = np.where(used, inf, minv)
            j1 = int(np.argmin(masked))
            delta = masked[j1]
            u[owner[used]] += delta
            v[used] -= delta
            minv[~used] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1
    assign = [0] * n
    for j in range(1, n + 1):
        assign[int(owner[j]) - 1] = j - 1
    return assign


def min_cost_assignment(cost: Sequence[Sequence[int]] | np.ndarray) -> tuple[list[int], int]:
    """Solve the assignment problem exactly.

    Returns ``(assign, total)`` where row ``i`` is matched to column
    ``assign[i]`` and ``total`` is the minimum of ``sum cost[i][assign[i]]``.

    >>> min_cost_assignment([[4, 1, 3], [2, 0, 5], [3, 2, 2]])
    ([1, 0, 2], 5)
    """
    rows = _as_rows(cost)
    n = len(rows)
    biggest = max(max(abs(x) for x in row) for row in rows)
    if (biggest + 1) * 4 * (n + 1) < _INT64_LIMIT:
        assign = _hungarian_numpy(np.array(rows, dtype=np.int64)) if n > 1 else [0]
    else:
        assign = _hungarian_python(rows)
    total = sum(rows[i][assign[i]] for i in range(n))
    return assign, total
