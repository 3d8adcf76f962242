"""Swap insertion so that every two-qubit gate acts on a coupled pair.

Two methods are provided. ``basic`` walks the first operand along a shortest
path toward the second. ``lookahead`` considers moving either end of that path
and keeps the swap that leaves the next few two-qubit gates closest together.
"""

from __future__ import annotations

from ..backend import BackendModel, shortest_path
from ..circuit import Circuit, Gate
from ..errors import ContractError
from .layout import Layout

LOOKAHEAD_WINDOW = 8


def _full_permutation(layout: Layout, n_phys: int) -> list[int]:
    if len(set(layout)) != len(layout) or any(not 0 <= p < n_phys for p in layout):
        raise ContractError(f"layout {layout} is not an injective map into {n_phys} physical qubits")
    free = [p for p in range(n_phys) if p not in set(layout)]
    return list(layout) + free


def route_with_layout(c: Circuit, b: BackendModel, layout: Layout, method: str = "basic") -> tuple[Circuit, Layout]:
    """Route ``c`` and return it together with the final logical->physical map."""
    if method not in ("basic", "lookahead"):
        raise ContractError(f"unknown routing method {method!r}")
    if len(layout) != c.num_qubits:
        raise ContractError("layout size must equal circuit width")
    l2p = _full_permutation(layout, b.num_qubits)
    p2l = [0] * b.num_qubits
    for v, p in enumerate(l2p):
        p2l[p] = v
    dist = b.distance

    two_q = [i for i, g in enumerate(c.gates) if g.is_two_qubit]
    out: list[Gate] = []

    def do_swap(p: int, q: int) -> None:
        out.append(Gate("swap", (p, q)))
        vp, vq = p2l[p], p2l[q]
        p2l[p], p2l[q] = vq, vp
        l2p[vp], l2p[vq] = q, p

    def pending_cost(upcoming: list[Gate], p: int, q: int) -> int:
        # distance sum if physical qubits p and q were exchanged
        def where(v: int) -> int:
            x = l2p[v]
            return q if x == p else p if x == q else x

        return sum(int(dist[where(g.qubits[0]), where(g.qubits[1])]) for g in upcoming)

    cursor = 0
    for idx, g in enumerate(c.gates):
        if not g.is_two_qubit:
            out.append(Gate(g.name, tuple(l2p[q] for q in g.qubits), g.params, g.clbit))
            continue
        while cursor < len(two_q) and two_q[cursor] <= idx:
            cursor += 1
        a, bq = g.qubits
        while dist[l2p[a], l2p[bq]] > 1:
            path = shortest_path(b, l2p[a], l2p[bq])
            forward = (path[0], path[1])
            if method == "lookahead":
                backward = (path[-1], path[-2])
                upcoming = [c.gates[j] for j in two_q[cursor:cursor + LOOKAHEAD_WINDOW]]
                if pending_cost(upcoming, *backward) < pending_cost(upcoming, *forward):
                    do_swap(*backward)
                    continue
            do_swap(*forward)
        out.append(Gate(g.name, (l2p[a], l2p[bq]), g.params, g.clbit))

    routed = Circuit(c.name, b.num_qubits, c.num_clbits, tuple(out), c.metadata)
    return routed, tuple(l2p[: c.num_qubits])


def route(c: Circuit, b: BackendModel, layout: Layout, method: str = "basic") -> Circuit:
    return route_with_layout(c, b, layout, method)[0]
