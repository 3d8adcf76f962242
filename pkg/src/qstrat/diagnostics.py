"""One-dimensional distribution distances on an aligned empirical-CDF grid."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ContractError


def _aligned_cdfs(x: Sequence[float], y: Sequence[float]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    xa = np.sort(np.asarray(x, dtype=float))
    ya = np.sort(np.asarray(y, dtype=float))
    if xa.size == 0 or ya.size == 0:
        raise ContractError("distribution distances need non-empty samples")
    if not (np.all(np.isfinite(xa)) and np.all(np.isfinite(ya))):
        raise ContractError("samples must be finite")
    grid = np.union1d(xa, ya)
    # right-continuous: F(z) = #{v <= z} / n
    fx = np.searchsorted(xa, grid, side="right") / xa.size
    fy = np.searchsorted(ya, grid, side="right") / ya.size
    return grid, fx, fy


def ks_distance(x: Sequence[float], y: Sequence[float]) -> float:
    _, fx, fy = _aligned_cdfs(x, y)
    return float(np.max(np.abs(fx - fy)))


def w1_distance(x: Sequence[float], y: Sequence[float]) -> float:
    grid, fx, fy = _aligned_cdfs(x, y)
    return float(np.sum(np.abs(fx - fy)[:-1] * np.diff(grid)))


def cvm_distance(x: Sequence[float], y: Sequence[float]) -> float:
    grid, fx, fy = _aligned_cdfs(x, y)
    return float(np.sum(((fx - fy) ** 2)[:-1] * np.diff(grid)))


def distances(x: Sequence[float], y: Sequence[float]) -> dict[str, float]:
    return {"ks": ks_distance(x, y), "w1": w1_distance(x, y), "cvm": cvm_distance(x, y)}
