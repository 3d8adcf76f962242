"""Bayesian linear surrogate that orders candidate strategies Thompson-style.

The model is ``y = phi(s) . w + noise`` with an isotropic Gaussian prior on
``w``. Posterior samples are drawn through a Cholesky factor of the precision
matrix, so the covariance is never formed. The surrogate only reorders
candidates; every candidate is still evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, cholesky, solve_triangular

from .errors import ContractError
from .strategy import StrategySpec

FEATURE_DIM = 12
POSTERIOR_FORMAT = 1


def featurize(s: StrategySpec) -> np.ndarray:
    return np.array(
        [
            1.0,
            s.optimization_level / 3.0,
            float(s.routing_method == "lookahead"),
            float(s.layout_method == "noise_aware"),
            float(s.layout_method == "trivial"),
            float(s.pauli_twirling),
            float(s.dynamical_decoupling),
            float(s.measurement_twirling),
            float(s.readout_mitigation),
            float(s.zne),
            float(s.cutting),
            s.num_twirls / 8.0,
        ]
    )


@dataclass
class LinearPosterior:
    alpha: float = 1.0
    sigma: float = 1.0
    xtx: np.ndarray = field(default_factory=lambda: np.zeros((FEATURE_DIM, FEATURE_DIM)))
    xty: np.ndarray = field(default_factory=lambda: np.zeros(FEATURE_DIM))
    precision: np.ndarray | None = None
    mean: np.ndarray = field(default_factory=lambda: np.zeros(FEATURE_DIM))
    t: int = 0

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.sigma > 0):
            raise ContractError("alpha and sigma must be positive")
        if self.precision is None:
            self.precision = self.rebuilt_precision()

    @property
    def dim(self) -> int:
        return self.xty.shape[0]

    def rebuilt_precision(self) -> np.ndarray:
        lam = self.alpha * np.eye(self.dim) + self.xtx / self.sigma ** 2
        return 0.5 * (lam + lam.T)

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": POSTERIOR_FORMAT,
            "alpha": self.alpha,
            "sigma": self.sigma,
            "t": self.t,
            "precision": self.precision.reshape(-1).tolist(),
            "mean": self.mean.tolist(),
            "xtx": self.xtx.reshape(-1).tolist(),
            "xty": self.xty.tolist(),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> LinearPosterior:
        if d.get("format") != POSTERIOR_FORMAT:
            raise ContractError(f"unsupported posterior format {d.get('format')!r}")
        n = len(d["mean"])
        return cls(
            alpha=float(d["alpha"]),
            sigma=float(d["sigma"]),
            xtx=np.asarray(d["xtx"], dtype=float).reshape(n, n),
            xty=np.asarray(d["xty"], dtype=float),
            precision=np.asarray(d["precision"], dtype=float).reshape(n, n),
            mean=np.asarray(d["mean"], dtype=float),
            t=int(d["t"]),
        )


def prior(alpha: float = 1.0, sigma: float = 1.0, dim: int = FEATURE_DIM) -> LinearPosterior:
    return LinearPosterior(alpha, sigma, np.zeros((dim, dim)), np.zeros(dim), None, np.zeros(dim), 0)


def update(p: LinearPosterior, phi: Sequence[float], y: float) -> LinearPosterior:
    """Posterior after one more observation ``(phi, y)``; ``p`` is left untouched."""
    if not math.isfinite(y):
        raise ContractError(f"surrogate observations must be finite, got {y}")
    phi = np.asarray(phi, dtype=float)
    xtx = p.xtx + np.outer(phi, phi)
    xty = p.xty + phi * y
    lam = p.precision + np.outer(phi, phi) / p.sigma ** 2
    mean = cho_solve(cho_factor(lam, lower=True), xty / p.sigma ** 2)
    return LinearPosterior(p.alpha, p.sigma, xtx, xty, lam, mean, p.t + 1)


def _cholesky(p: LinearPosterior) -> np.ndarray:
    try:
        return cholesky(p.precision, lower=True)
    except LinAlgError:
        pass
    try:
        # numerical drift: rebuild from the accumulators
        return cholesky(p.rebuilt_precision(), lower=True)
    except LinAlgError as exc:
        raise ContractError("posterior precision is not positive definite") from exc


def sample_weights(
    p: LinearPosterior,
    rng_seed: int | np.random.Generator | None = None,
    size: int | None = None,
    z: np.ndarray | None = None,
) -> np.ndarray:
    """Draw ``mean + L^-T z`` with ``precision = L L^T``.

    ``size`` gives a ``(size, dim)`` batch; ``z`` overrides the normal draws.
    """
    chol = _cholesky(p)
    if z is None:
        rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
        z = rng.standard_normal((p.dim,) if size is None else (p.dim, size))
    z = np.asarray(z, dtype=float)
    noise = solve_triangular(chol.T, z, lower=False)
    if z.ndim == 1:
        return p.mean + noise
    return (p.mean[:, None] + noise).T


def order_by_weights(candidates: Sequence[StrategySpec], w: np.ndarray) -> list[int]:
    scores = np.array([featurize(s) @ w for s in candidates])
    return [int(i) for i in np.argsort(scores, kind="stable")]


def propose_order(
    p: LinearPosterior,
    candidates: Sequence[StrategySpec],
    rng_seed: int | None = None,
    warmup: int = FEATURE_DIM,
) -> list[int]:
    """Evaluation order over ``candidates``: random while ``t < warmup``, then by sampled score."""
    if not candidates:
        raise ContractError("no candidates to order")
    rng = np.random.default_rng(rng_seed)
    if p.t < warmup:
        return [int(i) for i in rng.permutation(len(candidates))]
    return order_by_weights(candidates, sample_weights(p, rng))
