"""Initial placement of logical qubits onto physical qubits."""

from __future__ import annotations

from ..backend import BackendModel, quality_score
from ..circuit import Circuit
from ..errors import CapacityError

Layout = tuple[int, ...]  # layout[logical] = physical


def _check_capacity(c: Circuit, b: BackendModel) -> None:
    if c.num_qubits > b.num_qubits:
        raise CapacityError(f"circuit {c.name!r} needs {c.num_qubits} qubits, backend {b.name} has {b.num_qubits}")


def interaction_degree(c: Circuit) -> list[int]:
    deg = [0] * c.num_qubits
    for g in c.gates:
        if g.is_two_qubit:
            for q in g.qubits:
                deg[q] += 1
    return deg


def trivial_layout(c: Circuit, b: BackendModel) -> Layout:
    _check_capacity(c, b)
    return tuple(range(c.num_qubits))


def noise_aware_layout(c: Circuit, b: BackendModel) -> Layout:
    """Most active logical qubits go to the highest-quality physical qubits."""
    _check_capacity(c, b)
    deg = interaction_degree(c)
    logical = sorted(range(c.num_qubits), key=lambda q: (-deg[q], q))
    physical = sorted(range(b.num_qubits), key=lambda p: (-quality_score(b, p), p))
    layout = [0] * c.num_qubits
    for lq, pq in zip(logical, physical):
        layout[lq] = pq
    return tuple(layout)


def _dfs_order(b: BackendModel, start: int = 0) -> list[int]:
    order: list[int] = []
    seen: set[int] = set()
    stack = [start]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        order.append(u)
        stack.extend(sorted(b.neighbors[u], reverse=True))
    return order


def default_layout(c: Circuit, b: BackendModel) -> Layout:
    """Logical qubits in order of first two-qubit use, laid along a DFS walk of the coupling graph."""
    _check_capacity(c, b)
    first_use: list[int] = []
    for g in c.gates:
        if g.is_two_qubit:
            for q in g.qubits:
                if q not in first_use:
                    first_use.append(q)
    logical = first_use + [q for q in range(c.num_qubits) if q not in first_use]
    walk = _dfs_order(b)
    layout = [0] * c.num_qubits
    for lq, pq in zip(logical, walk):
        layout[lq] = pq
    return tuple(layout)


def choose_layout(c: Circuit, b: BackendModel, method: str) -> Layout:
    if method == "trivial":
        return trivial_layout(c, b)
    if method == "noise_aware":
        return noise_aware_layout(c, b)
    return default_layout(c, b)
