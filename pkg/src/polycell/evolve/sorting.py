"""Pareto dominance, non-dominated sorting and crowding distance (minimisation)."""

from __future__ import annotations

import numpy as np

from polycell.errors import ContractError


def dominates(a, b) -> bool:
    """True iff a <= b componentwise with at least one strict improvement."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ContractError(f"objective arity mismatch: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def domination_matrix(objectives: np.ndarray) -> np.ndarray:
    """D[i, j] is True when member i dominates member j."""
    f = np.asarray(objectives, dtype=float)
    n, m = f.shape
    le = np.ones((n, n), dtype=bool)
    lt = np.zeros((n, n), dtype=bool)
    for k in range(m):
        col = f[:, k]
        le &= col[:, None] <= col[None, :]
        lt |= col[:, None] < col[None, :]
    return le & lt


def fast_nondominated_sort(objectives) -> tuple[list[list[int]], np.ndarray]:
    """Partition members into fronts; returns (fronts, rank per member).

    Indices within a front are ascending.
    """
    f = np.asarray(objectives, dtype=float)
    if f.ndim != 2:
        raise ContractError("objectives must be a 2-D array (members x objectives)")
    if np.isnan(f).any():
        raise ContractError("population contains unevaluated members")
    n = len(f)
    rank = np.full(n, -1, dtype=int)
    if n == 0:
        return [], rank
    dom = domination_matrix(f)
    # dominated_count[j]: how many members dominate j
    dominated_count = dom.sum(axis=0, dtype=np.int64)
    fronts: list[list[int]] = []
    current = np.flatnonzero(dominated_count == 0)
    level = 0
    while current.size:
        rank[current] = level
        fronts.append(current.tolist())
        dominated_count = dominated_count - dom[current].sum(axis=0, dtype=np.int64)
        dominated_count[rank >= 0] = -1
        current = np.flatnonzero(dominated_count == 0)
        level += 1
    return fronts, rank


def crowding_distance(front_objectives) -> np.ndarray:
    """Crowding distance of each member of one front.

    Boundary members of every objective get +inf; interior members sum the
    neighbour gap normalised by the objective's range over the front. An
    objective with zero range contributes nothing.
    """
    f = np.asarray(front_objectives, dtype=float)
    n, m = f.shape
    distance = np.zeros(n)
    if n <= 2:
        distance[:] = np.inf
        return distance
    for k in range(m):
        order = np.argsort(f[:, k], kind="stable")
        col = f[order, k]
        span = col[-1] - col[0]
        distance[order[0]] = np.inf
        distance[order[-1]] = np.inf
        if span > 0:
            distance[order[1:-1]] += (col[2:] - col[:-2]) / span
    return distance
