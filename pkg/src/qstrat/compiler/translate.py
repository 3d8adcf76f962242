"""Rewrite supported gates into the native basis {rz, sx, x, cx}."""

from __future__ import annotations

import math

from ..circuit import Circuit, Gate
from ..errors import TranslationError

NATIVE = frozenset({"rz", "sx", "x", "cx", "measure", "barrier"})

PI = math.pi


def _rz(q: int, theta: float) -> Gate:
    return Gate("rz", (q,), (theta,))


def _h(q: int) -> list[Gate]:
    return [_rz(q, PI / 2), Gate("sx", (q,)), _rz(q, PI / 2)]


def decompose(g: Gate) -> list[Gate]:
    """Native replacement for ``g``, equal up to global phase."""
    name = g.name
    if name in NATIVE:
        return [g]
    if len(g.qubits) == 1:
        (q,) = g.qubits
        if name == "h":
            return _h(q)
        if name == "z":
            return [_rz(q, PI)]
        if name == "y":
            return [_rz(q, PI), Gate("x", (q,))]
        if name == "s":
            return [_rz(q, PI / 2)]
        if name == "sdg":
            return [_rz(q, -PI / 2)]
        if name == "t":
            return [_rz(q, PI / 4)]
        if name == "rx":
            return _h(q) + [_rz(q, g.params[0])] + _h(q)
        if name == "ry":
            return [_rz(q, -PI / 2)] + _h(q) + [_rz(q, g.params[0])] + _h(q) + [_rz(q, PI / 2)]
    else:
        a, b = g.qubits
        if name == "cz":
            return _h(b) + [Gate("cx", (a, b))] + _h(b)
        if name == "swap":
            return [Gate("cx", (a, b)), Gate("cx", (b, a)), Gate("cx", (a, b))]
    raise TranslationError(f"no decomposition for gate {name!r}")


def translate(c: Circuit) -> Circuit:
    gates: list[Gate] = []
    for g in c.gates:
        gates.extend(decompose(g))
    return c.replace(gates=tuple(gates))


def is_native(c: Circuit) -> bool:
    return all(g.name in NATIVE for g in c.gates)
