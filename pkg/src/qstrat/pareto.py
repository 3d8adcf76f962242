"""Pareto dominance, non-dominated filtering and objective-based selection."""

from __future__ import annotations

import logging
import math
from typing import Any, Mapping, Sequence

from .errors import ContractError
from .metrics import finite_safe_score

log = logging.getLogger(__name__)

Vector = Sequence[float]


def dominates(a: Vector, b: Vector) -> bool:
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def _normalize(points: Sequence[Vector]) -> list[tuple[float, ...]]:
    dims = len(points[0])
    lo = [min(p[r] for p in points) for r in range(dims)]
    hi = [max(p[r] for p in points) for r in range(dims)]
    return [
        tuple((p[r] - lo[r]) / (hi[r] - lo[r]) if hi[r] > lo[r] else 0.0 for r in range(dims))
        for p in points
    ]


def pareto_front(points: Sequence[Vector]) -> list[int]:
    """Indices of non-dominated points, ascending; exact duplicates survive together.

    Points are grouped by exact value, visited in order of their normalized
    coordinate sum (dominators come first), and kept in an incremental
    non-dominated set. Dominance itself is always tested on the raw values.
    """
    if not points:
        return []
    groups: dict[tuple[float, ...], list[int]] = {}
    for i, p in enumerate(points):
        key = tuple(float(x) for x in p)
        if not all(math.isfinite(x) for x in key):
            raise ContractError(f"point {i} has non-finite coordinates {key}")
        groups.setdefault(key, []).append(i)
    uniq = list(groups)
    norm = _normalize(uniq)
    order = sorted(range(len(uniq)), key=lambda j: (sum(norm[j]), norm[j], j))
    front: list[int] = []
    for j in order:
        v = uniq[j]
        if any(dominates(uniq[f], v) for f in front):
            continue
        front = [f for f in front if not dominates(v, uniq[f])]
        front.append(j)
    return sorted(i for j in front for i in groups[uniq[j]])


def pareto_front_bruteforce(points: Sequence[Vector]) -> list[int]:
    return [i for i, p in enumerate(points) if not any(dominates(q, p) for j, q in enumerate(points) if j != i)]


def select(
    candidates: Sequence[tuple[Vector | None, Mapping[str, Any]]],
    weights: Mapping[str, float] | None = None,
    pareto: bool = False,
) -> int:
    """Index of the selected candidate.

    With ``pareto`` the pool is the front of candidates that have a finite
    tuple; the lowest finite-safe score wins, ties to the lowest index.
    """
    if not candidates:
        raise ContractError("select needs at least one candidate")
    scores = [finite_safe_score(m, weights) for _, m in candidates]
    pool = list(range(len(candidates)))
    if pareto:
        finite = [i for i, (t, _) in enumerate(candidates) if t is not None and all(math.isfinite(x) for x in t)]
        if finite:
            pool = [finite[k] for k in pareto_front([candidates[i][0] for i in finite])]  # type: ignore[misc]
    best = min(pool, key=lambda i: (scores[i], i))
    if math.isinf(scores[best]) and all(math.isinf(s) for s in scores):
        log.warning("all %d candidates are invalid; falling back to index %d", len(candidates), min(pool))
        return min(range(len(candidates)))
    return best
