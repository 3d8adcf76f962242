"""Backend targets: coupling graph plus calibration numbers."""

from __future__ import annotations

import hashlib
import json
import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .circuit import canonical_json
from .errors import BackendError

# fallbacks for absent calibration fields
FALLBACK_READOUT = 0.05
FALLBACK_T1 = 50.0  # microseconds
FALLBACK_T2 = 30.0  # microseconds
FALLBACK_SQ_ERROR = 5e-4
FALLBACK_EDGE_ERROR = 1e-2

_FAKE_SPEC = re.compile(r"^fake:generic:(\d+)$")


@dataclass(frozen=True)
class QubitCalibration:
    readout_error: float | None = None
    t1: float | None = None
    t2: float | None = None
    sq_error: float | None = None

    def __post_init__(self) -> None:
        for name in ("readout_error", "sq_error"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise BackendError(f"{name}={v} outside [0, 1]")
        for name in ("t1", "t2"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v > 0):
                raise BackendError(f"{name}={v} must be positive and finite")
        if self.t1 is not None and self.t2 is not None and self.t2 > 2 * self.t1:
            raise BackendError(f"t2={self.t2} exceeds 2*t1={2 * self.t1}")

    def to_dict(self) -> dict[str, Any]:
        return {"readout_error": self.readout_error, "t1": self.t1, "t2": self.t2, "sq_error": self.sq_error}


def _edge(p: int, q: int) -> tuple[int, int]:
    return (p, q) if p < q else (q, p)


@dataclass(frozen=True)
class BackendModel:
    name: str
    num_qubits: int
    edges: frozenset[tuple[int, int]]
    qubit_cal: tuple[QubitCalibration, ...]
    edge_error: Mapping[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", frozenset(_edge(*e) for e in self.edges))
        object.__setattr__(self, "edge_error", {_edge(*k): float(v) for k, v in self.edge_error.items()})
        object.__setattr__(self, "qubit_cal", tuple(self.qubit_cal))
        if self.num_qubits < 2:
            raise BackendError("backend needs at least 2 qubits")
        for p, q in self.edges:
            if p == q:
                raise BackendError(f"self-loop on qubit {p}")
            if not (0 <= p < self.num_qubits and 0 <= q < self.num_qubits):
                raise BackendError(f"edge ({p}, {q}) out of range")
        for e, v in self.edge_error.items():
            if e not in self.edges:
                raise BackendError(f"edge error given for uncoupled pair {e}")
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise BackendError(f"edge error {v} outside [0, 1]")
        if len(self.qubit_cal) != self.num_qubits:
            raise BackendError("need one calibration record per qubit")
        if len(self._bfs_dist(0)) != self.num_qubits:
            raise BackendError("coupling graph is not connected")

    # frozen dataclasses with dict fields are not hashable by default; identity is enough
    __hash__ = object.__hash__

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[set[int]] = [set() for _ in range(self.num_qubits)]
        for p, q in self.edges:
            adj[p].add(q)
            adj[q].add(p)
        return tuple(tuple(sorted(a)) for a in adj)

    def _bfs_dist(self, src: int) -> dict[int, int]:
        adj: dict[int, list[int]] = {}
        for p, q in self.edges:
            adj.setdefault(p, []).append(q)
            adj.setdefault(q, []).append(p)
        dist = {src: 0}
        todo = deque([src])
        while todo:
            u = todo.popleft()
            for v in adj.get(u, ()):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    todo.append(v)
        return dist

    @cached_property
    def distance(self) -> np.ndarray:
        d = np.zeros((self.num_qubits, self.num_qubits), dtype=int)
        for p in range(self.num_qubits):
            for q, k in self._bfs_dist(p).items():
                d[p, q] = k
        return d

    def is_coupled(self, p: int, q: int) -> bool:
        return _edge(p, q) in self.edges

    def readout_error(self, p: int) -> float:
        r = self.qubit_cal[p].readout_error
        return FALLBACK_READOUT if r is None else r

    def sq_error(self, p: int) -> float:
        e = self.qubit_cal[p].sq_error
        return FALLBACK_SQ_ERROR if e is None else e

    def two_qubit_error(self, p: int, q: int) -> float:
        return self.edge_error.get(_edge(p, q), FALLBACK_EDGE_ERROR)

    @cached_property
    def calibration_id(self) -> str:
        payload = canonical_json(self.to_dict())
        return hashlib.sha256(payload.encode()).hexdigest()

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "num_qubits": self.num_qubits,
            "edges": [list(e) for e in sorted(self.edges)],
            "qubits": [c.to_dict() for c in self.qubit_cal],
            "edge_errors": {f"{p}-{q}": v for (p, q), v in sorted(self.edge_error.items())},
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> BackendModel:
        try:
            edge_errors = {}
            for key, v in (d.get("edge_errors") or {}).items():
                a, b = key.split("-")
                edge_errors[(int(a), int(b))] = float(v)
            return cls(
                name=str(d["name"]),
                num_qubits=int(d["num_qubits"]),
                edges=frozenset((int(e[0]), int(e[1])) for e in d["edges"]),
                qubit_cal=tuple(
                    QubitCalibration(**{k: (None if q.get(k) is None else float(q[k])) for k in
                                        ("readout_error", "t1", "t2", "sq_error")})
                    for q in d["qubits"]
                ),
                edge_error=edge_errors,
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise BackendError(f"invalid backend document: {exc}") from exc


def _spec_rng(spec: str) -> np.random.Generator:
    digest = hashlib.sha256(spec.encode("utf-8")).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "little"))


def fake_generic(n: int, spec: str | None = None) -> BackendModel:
    """Ring-topology backend with seeded synthetic calibration."""
    if n < 2:
        raise BackendError(f"fake:generic needs at least 2 qubits, got {n}")
    spec = spec or f"fake:generic:{n}"
    rng = _spec_rng(spec)
    cals = []
    for _ in range(n):
        r = rng.uniform(0.01, 0.05)
        t1 = rng.uniform(50.0, 150.0)
        t2 = rng.uniform(30.0, min(120.0, 2 * t1))
        sq = rng.uniform(1e-4, 1e-3)
        cals.append(QubitCalibration(float(r), float(t1), float(t2), float(sq)))
    edges = sorted({_edge(i, (i + 1) % n) for i in range(n)})
    edge_error = {e: float(rng.uniform(5e-3, 2e-2)) for e in edges}
    return BackendModel(f"fake_generic_{n}", n, frozenset(edges), tuple(cals), edge_error)


def resolve_backend(spec: str) -> BackendModel:
    m = _FAKE_SPEC.match(spec)
    if m:
        return fake_generic(int(m.group(1)), spec)
    if spec.startswith("file:"):
        path = Path(spec[len("file:"):])
        try:
            doc = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise BackendError(f"cannot read backend file {path}: {exc}") from exc
        return BackendModel.from_dict(doc)
    raise BackendError(f"unrecognised backend spec {spec!r} (expected fake:generic:N or file:PATH)")


def save_backend(b: BackendModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(b.to_dict(), indent=2, sort_keys=True) + "\n")


def shortest_path(b: BackendModel, p: int, q: int) -> list[int]:
    """Minimum-hop path from ``p`` to ``q``; lower-index neighbours are explored first."""
    if p == q:
        return [p]
    parent = {p: p}
    todo = deque([p])
    while todo:
        u = todo.popleft()
        for v in b.neighbors[u]:
            if v in parent:
                continue
            parent[v] = u
            if v == q:
                path = [q]
                while path[-1] != p:
                    path.append(parent[path[-1]])
                return path[::-1]
            todo.append(v)
    raise BackendError(f"no path between {p} and {q}")  # unreachable for a connected graph


def quality_score(b: BackendModel, p: int) -> float:
    cal = b.qubit_cal[p]
    r = FALLBACK_READOUT if cal.readout_error is None else cal.readout_error
    t1 = FALLBACK_T1 if cal.t1 is None else cal.t1
    t2 = FALLBACK_T2 if cal.t2 is None else cal.t2
    return (1.0 - r) + 1e-5 * (t1 + t2)
