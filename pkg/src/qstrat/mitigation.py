"""Counts-level mitigation: global folding ZNE on parity and reduced-subspace readout correction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Mapping, Sequence

import numpy as np

from .backend import BackendModel
from .circuit import Circuit, Gate
from .errors import ContractError, MitigationError
from .executor import Counts, measured_physical_qubits, run
from .strategy import StrategySpec

MAX_SUBSPACE = 2 ** 10


@dataclass
class PseudoDistribution:
    probs: dict[str, float]
    normalized: bool = True
    notes: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.probs = dict(sorted(self.probs.items()))
        if self.normalized:
            total = sum(self.probs.values())
            if any(v < 0 or v > 1 for v in self.probs.values()) or abs(total - 1) > 1e-9:
                raise ContractError(f"normalized distribution sums to {total}")

    @property
    def total(self) -> float:
        return math.fsum(self.probs.values())

    def top_probability(self) -> float:
        return max(self.probs.values(), default=0.0)

    def entropy(self) -> float:
        return -math.fsum(p * math.log2(p) for p in self.probs.values() if p > 0)

    def to_dict(self) -> dict[str, Any]:
        return {"probs": dict(self.probs), "normalized": self.normalized}


def _normalized(values: Mapping[str, float]) -> dict[str, float]:
    clipped = {k: max(0.0, float(v)) for k, v in values.items()}
    total = math.fsum(clipped.values())
    if total <= 0:
        raise MitigationError("distribution has no positive mass")
    return {k: v / total for k, v in clipped.items() if v > 0}


# -- folding -------------------------------------------------------------------

def _adjoint(g: Gate) -> list[Gate]:
    name = g.name
    if name in ("h", "x", "y", "z", "cx", "cz", "swap", "barrier"):
        return [g]
    if name == "s":
        return [Gate("sdg", g.qubits)]
    if name == "sdg":
        return [Gate("s", g.qubits)]
    if name == "t":
        return [Gate("rz", g.qubits, (-math.pi / 4,))]
    if name == "sx":
        # sx^3 = sx^dagger, kept inside the native basis
        return [Gate("sx", g.qubits), Gate("x", g.qubits)]
    if name in ("rx", "ry", "rz"):
        return [Gate(name, g.qubits, (-g.params[0],))]
    raise ContractError(f"cannot invert {name!r}")


def fold(c: Circuit, scale: int) -> Circuit:
    """Replace the unitary part ``U`` by ``U (U^dag U)^((scale-1)/2)``; measurements are kept."""
    if scale < 1 or scale % 2 == 0:
        raise ContractError(f"fold scale must be an odd integer >= 1, got {scale}")
    measured: set[int] = set()
    body: list[Gate] = []
    tail: list[Gate] = []
    for g in c.gates:
        if g.name == "measure":
            measured.add(g.qubits[0])
            tail.append(g)
        elif measured.intersection(g.qubits):
            raise ContractError("fold needs measurements at the end of every measured qubit")
        else:
            body.append(g)
    inverse = [a for g in reversed(body) for a in _adjoint(g)]
    gates = list(body)
    for _ in range((scale - 1) // 2):
        gates += inverse + body
    return c.replace(gates=tuple(gates + tail))


# -- ZNE -----------------------------------------------------------------------

def parity_expectation(k: Counts) -> float:
    return math.fsum((-1) ** key.count("1") * p for key, p in k.probabilities().items())


def zne_extrapolate(points: Sequence[tuple[float, float]], degree: int = 1) -> float:
    """Least-squares polynomial fit of degree ``degree``; returns the value at zero."""
    xs = np.array([float(x) for x, _ in points])
    ys = np.array([float(y) for _, y in points])
    if degree < 0:
        raise ContractError("degree must be non-negative")
    if len(np.unique(xs)) < degree + 1:
        raise ContractError(f"need at least {degree + 1} distinct scale factors, got {len(np.unique(xs))}")
    vander = np.vander(xs, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(vander, ys, rcond=None)
    return float(coef[0])


def parity_adjusted(base: Mapping[str, float], target_parity: float, width: int) -> PseudoDistribution:
    """Rescale even/odd mass of ``base`` so the parity matches ``target_parity``."""
    even_target = min(1.0, max(0.0, (1.0 + target_parity) / 2.0))
    targets = {0: even_target, 1: 1.0 - even_target}
    mass = {0: 0.0, 1: 0.0}
    for key, p in base.items():
        mass[key.count("1") % 2] += p
    out: dict[str, float] = {}
    notes = []
    for cls in (0, 1):
        if targets[cls] <= 0:
            continue
        members = {k: p for k, p in base.items() if k.count("1") % 2 == cls and p > 0}
        if mass[cls] > 0:
            for k, p in members.items():
                out[k] = p * targets[cls] / mass[cls]
        else:
            strings = ["".join(bits) for bits in product("01", repeat=width) if bits.count("1") % 2 == cls]
            for k in strings:
                out[k] = targets[cls] / len(strings)
            notes.append(f"{'odd' if cls else 'even'} class filled uniformly")
    return PseudoDistribution(_normalized(out), True, notes)


@dataclass
class ZNEResult:
    scale_factors: list[int]
    shots: list[int]
    parities: list[float]
    extrapolated: float
    distribution: PseudoDistribution

    def summary(self) -> dict[str, Any]:
        return {
            "scale_factors": self.scale_factors,
            "shots": self.shots,
            "parities": self.parities,
            "extrapolated": self.extrapolated,
            "p_max": self.distribution.top_probability(),
            "entropy": self.distribution.entropy(),
        }


def split_shots(shots: int, parts: int) -> list[int]:
    base, rem = divmod(shots, parts)
    return [base + rem] + [base] * (parts - 1)


def zne_counts(
    c: Circuit,
    b: BackendModel,
    s: StrategySpec,
    shots: int,
    seed: int,
    noisy: bool = True,
) -> ZNEResult:
    if not s.zne:
        raise ContractError("strategy does not enable ZNE")
    factors = list(s.zne_scale_factors)
    alloc = split_shots(shots, len(factors))
    if min(alloc) < 1:
        raise ContractError(f"{shots} shots cannot cover {len(factors)} scale factors")
    runs = [run(fold(c, lam), b, n, seed + i, noisy) for i, (lam, n) in enumerate(zip(factors, alloc))]
    parities = [parity_expectation(k) for k in runs]
    y0 = zne_extrapolate(list(zip(factors, parities)), s.zne_degree)
    dist = parity_adjusted(runs[0].probabilities(), y0, runs[0].width)
    return ZNEResult(factors, alloc, parities, y0, dist)


# -- readout -------------------------------------------------------------------

def assignment_submatrix(keys: Sequence[str], readout: Sequence[float]) -> np.ndarray:
    """``A[x, y]`` = probability of reading ``x`` given true ``y``, restricted to ``keys``.

    ``readout[i]`` is the flip probability of bit ``i`` (least significant first).
    """
    w = len(readout)
    bits = np.array([[int(key[w - 1 - i]) for i in range(w)] for key in keys], dtype=bool)
    r = np.asarray(readout, dtype=float)
    mismatch = bits[:, None, :] != bits[None, :, :]
    return np.prod(np.where(mismatch, r, 1.0 - r), axis=2)


def mitigate_probabilities(p_obs: Mapping[str, float], readout: Sequence[float]) -> PseudoDistribution:
    """Solve ``A_sub q = p_obs`` over the keys of ``p_obs``; clip and renormalize."""
    keys = [key for key, p in p_obs.items() if p > 0]
    if not keys:
        raise MitigationError("nothing observed")
    if any(len(key) != len(readout) for key in keys):
        raise ContractError(f"keys must have width {len(readout)}")
    if len(keys) > MAX_SUBSPACE:
        raise MitigationError(f"observed subspace {len(keys)} exceeds cap {MAX_SUBSPACE}")
    a_sub = assignment_submatrix(keys, readout)
    rhs = np.array([float(p_obs[key]) for key in keys])
    try:
        if np.linalg.cond(a_sub) > 1e12:
            raise np.linalg.LinAlgError("ill-conditioned")
        q = np.linalg.solve(a_sub, rhs)
    except np.linalg.LinAlgError as exc:
        raise MitigationError(f"restricted assignment system is singular: {exc}") from exc
    return PseudoDistribution(_normalized(dict(zip(keys, q))), True)


def readout_mitigate(
    k: Counts | Mapping[str, float], b: BackendModel, measured_qubits: Sequence[int]
) -> PseudoDistribution:
    """Invert the tensor-product flip model on the subspace of observed bitstrings.

    ``measured_qubits[i]`` is the physical qubit read into bit ``i`` of the key
    (least-significant, i.e. rightmost, first). ``k`` may be counts or an
    already-normalized probability map.
    """
    probs = k.probabilities() if isinstance(k, Counts) else dict(k)
    width = len(next(iter(probs))) if probs else 0
    if len(measured_qubits) != width:
        raise ContractError(f"{len(measured_qubits)} measured qubits for {width}-bit keys")
    return mitigate_probabilities(probs, [b.readout_error(q) for q in measured_qubits])


def readout_mitigate_circuit(k: Counts, b: BackendModel, c: Circuit) -> PseudoDistribution:
    return readout_mitigate(k, b, measured_physical_qubits(c))
