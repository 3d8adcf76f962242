"""Shot-based execution of compiled circuits with calibration-driven Pauli noise."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .backend import BackendModel
from .circuit import Circuit, Gate
from .errors import ContractError, ExecutionError
from .sim import apply_gate, marginal_probabilities, measurement_map, unitary_gates, zero_state

MAX_QUBITS = 14

_PAULI_1Q = ("x", "y", "z")
_PAULI_NAMES = ("i", "x", "y", "z")


@dataclass(frozen=True)
class Counts:
    """Outcome histogram; keys are bitstrings with the highest measured clbit leftmost."""

    counts: Mapping[str, int]

    def __post_init__(self) -> None:
        clean = {str(k): int(v) for k, v in self.counts.items() if int(v) != 0}
        object.__setattr__(self, "counts", dict(sorted(clean.items())))
        if any(v < 0 for v in clean.values()):
            raise ContractError("counts must be non-negative")
        if not clean:
            raise ContractError("counts must have positive shots")
        widths = {len(k) for k in clean}
        if len(widths) != 1 or any(set(k) - {"0", "1"} for k in clean):
            raise ContractError("keys must be equal-width bitstrings")

    @property
    def shots(self) -> int:
        return sum(self.counts.values())

    @property
    def width(self) -> int:
        return len(next(iter(self.counts)))

    def probabilities(self) -> dict[str, float]:
        n = self.shots
        return {k: v / n for k, v in self.counts.items()}

    def to_dict(self) -> dict[str, Any]:
        return {"counts": dict(self.counts), "shots": self.shots}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> Counts:
        k = cls(d["counts"])
        if "shots" in d and int(d["shots"]) != k.shots:
            raise ContractError("shots field disagrees with counts")
        return k

    def __add__(self, other: Counts) -> Counts:
        merged: Counter[str] = Counter(self.counts)
        merged.update(other.counts)
        return Counts(merged)


def entropy(k: Counts) -> float:
    h = 0.0
    for p in k.probabilities().values():
        if p > 0:
            h -= p * math.log2(p)
    return h


def top_probability(k: Counts) -> float:
    return max(k.counts.values()) / k.shots


def untwirl(k: Counts, mask: str) -> Counts:
    if len(mask) != k.width:
        raise ContractError(f"mask width {len(mask)} != key width {k.width}")
    m = int(mask, 2)
    w = k.width
    return Counts({format(int(key, 2) ^ m, f"0{w}b"): v for key, v in k.counts.items()})


def _compress(c: Circuit) -> tuple[list[Gate], list[int], list[tuple[int, int]]]:
    """Unitary gates relabelled onto the active qubits only."""
    gates = unitary_gates(c)
    mmap = measurement_map(c)
    if not mmap:
        raise ExecutionError("circuit has no measurements")
    active = sorted({q for g in gates for q in g.qubits} | {q for q, _ in mmap})
    if len(active) > MAX_QUBITS:
        raise ExecutionError(f"{len(active)} active qubits exceed the simulator cap of {MAX_QUBITS}")
    index = {q: i for i, q in enumerate(active)}
    local = [Gate(g.name, tuple(index[q] for q in g.qubits), g.params) for g in gates]
    return local, active, [(index[q], cb) for q, cb in mmap]


def _gate_error(b: BackendModel, g: Gate, active: list[int]) -> float:
    if g.name == "barrier":
        return 0.0
    if g.is_two_qubit:
        return b.two_qubit_error(active[g.qubits[0]], active[g.qubits[1]])
    return b.sq_error(active[g.qubits[0]])


def _final_probabilities(n: int, gates: list[Gate], inserts: Mapping[int, tuple[str, ...]], measured: list[int]) -> np.ndarray:
    psi = zero_state(n)
    for i, g in enumerate(gates):
        psi = apply_gate(psi, g)
        err = inserts.get(i)
        if err:
            for q, pname in zip(g.qubits, err):
                if pname != "i":
                    psi = apply_gate(psi, Gate(pname, (q,)))
    probs = marginal_probabilities(psi, measured)
    probs = np.clip(probs.real, 0.0, None)
    return probs / probs.sum()


def run(
    c: Circuit,
    b: BackendModel,
    shots: int = 1024,
    seed: int = 0,
    noisy: bool = True,
) -> Counts:
    """Sample ``shots`` outcomes of ``c`` (physical qubit indices of ``b``).

    Noisy mode draws one Pauli-error trajectory per shot; shots that share a
    trajectory are simulated together.
    """
    if shots < 1:
        raise ContractError("shots must be positive")
    if c.num_qubits > b.num_qubits:
        raise ExecutionError(f"circuit width {c.num_qubits} exceeds backend {b.num_qubits}")
    gates, active, mmap = _compress(c)
    n = len(active)
    measured = [q for q, _ in mmap]
    width = len(mmap)
    rng = np.random.default_rng(seed % 2 ** 64)

    trajectories: Counter[tuple[tuple[int, tuple[str, ...]], ...]] = Counter()
    if not noisy:
        trajectories[()] = shots
    else:
        probs = np.array([_gate_error(b, g, active) for g in gates])
        hits = rng.random((shots, len(gates))) < probs if gates else np.zeros((shots, 0), dtype=bool)
        for row in hits:
            events = []
            for i in np.flatnonzero(row):
                if len(gates[i].qubits) == 2:
                    code = int(rng.integers(1, 16))  # uniform non-identity two-qubit Pauli
                    events.append((int(i), (_PAULI_NAMES[code >> 2], _PAULI_NAMES[code & 3])))
                else:
                    events.append((int(i), (_PAULI_1Q[int(rng.integers(3))],)))
            trajectories[tuple(events)] += 1

    outcomes = []
    for traj in sorted(trajectories):
        count = trajectories[traj]
        p = _final_probabilities(n, gates, dict(traj), measured)
        outcomes.append(rng.choice(len(p), size=count, p=p))
    values = np.concatenate(outcomes)

    if noisy:
        flip_p = np.array([b.readout_error(active[q]) for q in measured])
        flips = rng.random((shots, width)) < flip_p
        weights = 1 << np.arange(width)
        values = values ^ (flips @ weights)
    tallies = Counter(int(v) for v in values)
    return Counts({format(v, f"0{width}b"): k for v, k in tallies.items()})


def measured_physical_qubits(c: Circuit) -> list[int]:
    """Physical qubit behind each counts bit, least-significant bit first."""
    return [q for q, _ in measurement_map(c)]
