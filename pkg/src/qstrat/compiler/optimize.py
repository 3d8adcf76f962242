"""Peephole optimization on native-basis circuits.

Level 0 leaves the circuit alone. Level 1 cancels adjacent self-inverse pairs
and drops zero rotations, level 2 also merges adjacent rz rotations, and
level 3 repeats the level-2 pass until nothing changes. Each level starts from
the previous level's output, so passes only ever remove or merge gates.
"""

from __future__ import annotations

import math

from ..circuit import Circuit, Gate

SELF_INVERSE = frozenset({"x", "cx"})
_TWO_PI = 2 * math.pi
_ZERO_TOL = 1e-12


def _wrap(theta: float) -> float:
    """Angle reduced into (-pi, pi]."""
    t = math.fmod(theta, _TWO_PI)
    if t <= -math.pi:
        t += _TWO_PI
    elif t > math.pi:
        t -= _TWO_PI
    return t


def _is_zero_angle(theta: float) -> bool:
    return abs(_wrap(theta)) < _ZERO_TOL


def _pass(c: Circuit, merge_rz: bool) -> Circuit:
    out: list[Gate | None] = []
    qstack: list[list[int]] = [[] for _ in range(c.num_qubits)]

    def last_on(g: Gate) -> int | None:
        # index of the previous kept gate iff it is the latest op on every wire of g
        tops = {qstack[q][-1] if qstack[q] else None for q in g.qubits}
        if len(tops) != 1:
            return None
        return tops.pop()

    def push(g: Gate) -> None:
        out.append(g)
        i = len(out) - 1
        for q in g.qubits:
            qstack[q].append(i)

    def pop(i: int) -> None:
        g = out[i]
        assert g is not None
        for q in g.qubits:
            qstack[q].pop()
        out[i] = None

    for g in c.gates:
        if g.name == "rz" and _is_zero_angle(g.params[0]):
            continue
        prev_i = last_on(g)
        prev = out[prev_i] if prev_i is not None else None
        if prev is not None and g.name in SELF_INVERSE and prev.name == g.name and prev.qubits == g.qubits:
            pop(prev_i)
            continue
        if merge_rz and prev is not None and g.name == "rz" and prev.name == "rz":
            pop(prev_i)
            theta = _wrap(prev.params[0] + g.params[0])
            if _is_zero_angle(theta):
                continue
            # re-insert at the old slot so wire order is kept
            merged = Gate("rz", g.qubits, (theta,))
            out[prev_i] = merged
            qstack[g.qubits[0]].append(prev_i)
            continue
        push(g)
    return c.replace(gates=tuple(g for g in out if g is not None))


def optimize(c: Circuit, level: int) -> Circuit:
    if level <= 0:
        return c
    c = _pass(c, merge_rz=False)
    if level == 1:
        return c
    c = _pass(c, merge_rz=True)
    if level == 2:
        return c
    while True:
        nxt = _pass(c, merge_rz=True)
        if nxt.gates == c.gates:
            return nxt
        c = nxt
