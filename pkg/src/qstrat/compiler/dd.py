"""Idle-window dynamical decoupling at gate level."""

from __future__ import annotations

import math

from ..circuit import Circuit, Gate
from ..errors import ContractError


def dd_gates(sequence: str, q: int) -> list[Gate]:
    x = Gate("x", (q,))
    if sequence == "XX":
        return [x, x]
    if sequence == "XY4":
        y = [Gate("rz", (q,), (math.pi,)), x]  # y up to phase
        return [x, *y, x, *y]
    raise ContractError(f"unknown DD sequence {sequence!r}")


def asap_layers(c: Circuit) -> list[int]:
    """Start layer of every gate; a barrier gets the level it synchronizes to."""
    qfront = [0] * c.num_qubits
    cfront = [0] * c.num_clbits
    layers = []
    for g in c.gates:
        level = max(qfront[q] for q in g.qubits)
        if g.name == "barrier":
            for q in g.qubits:
                qfront[q] = level
            layers.append(level)
            continue
        if g.clbit is not None:
            level = max(level, cfront[g.clbit])
        layers.append(level)
        for q in g.qubits:
            qfront[q] = level + 1
        if g.clbit is not None:
            cfront[g.clbit] = level + 1
    return layers


def idle_windows(c: Circuit) -> list[tuple[int, int, int]]:
    """(qubit, list index of the gate opening the window, window length in layers).

    Only windows enclosed by two events on the same qubit are reported.
    """
    layers = asap_layers(c)
    events: list[list[tuple[int, int, int]]] = [[] for _ in range(c.num_qubits)]
    for i, g in enumerate(c.gates):
        width = 0 if g.name == "barrier" else 1
        for q in g.qubits:
            events[q].append((layers[i], layers[i] + width, i))
    windows = []
    for q, evs in enumerate(events):
        for (_, end, i), (start, _, _) in zip(evs, evs[1:]):
            if start - end > 0:
                windows.append((q, i, start - end))
    return windows


def insert_dd(c: Circuit, sequence: str = "XX") -> Circuit:
    """Fill idle windows with an identity-composing pulse train without changing depth."""
    seq_len = len(dd_gates(sequence, 0))
    after: dict[int, list[Gate]] = {}
    for q, i, length in idle_windows(c):
        if length >= seq_len:
            after.setdefault(i, []).extend(dd_gates(sequence, q))
    if not after:
        return c
    gates: list[Gate] = []
    for i, g in enumerate(c.gates):
        gates.append(g)
        gates.extend(after.get(i, ()))
    return c.replace(gates=tuple(gates))
