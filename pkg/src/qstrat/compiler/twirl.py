"""Pauli twirling of cx gates and measurement twirling."""

from __future__ import annotations

import math

import numpy as np

from ..circuit import Circuit, Gate
from ..errors import ContractError

# Pauli encoded as (x, z) bits: I=(0,0), X=(1,0), Z=(0,1), Y=(1,1)
PAULIS = ((0, 0), (1, 0), (1, 1), (0, 1))


def cx_conjugate(pc: tuple[int, int], pt: tuple[int, int]) -> tuple[tuple[int, int], tuple[int, int]]:
    """Paulis (Qc, Qt) with Qc⊗Qt = CX (Pc⊗Pt) CX up to phase."""
    xc, zc = pc
    xt, zt = pt
    # X_c -> X_c X_t, Z_t -> Z_c Z_t, X_t and Z_c unchanged
    return (xc, zc ^ zt), (xt ^ xc, zt)


def pauli_gates(p: tuple[int, int], q: int) -> list[Gate]:
    x, z = p
    gates = []
    if z:
        gates.append(Gate("rz", (q,), (math.pi,)))
    if x:
        gates.append(Gate("x", (q,)))
    return gates


def twirl_circuit(c: Circuit, rng: np.random.Generator) -> Circuit:
    gates: list[Gate] = []
    for g in c.gates:
        if g.name != "cx":
            gates.append(g)
            continue
        a, b = g.qubits
        pa, pb = PAULIS[int(rng.integers(4))], PAULIS[int(rng.integers(4))]
        qa, qb = cx_conjugate(pa, pb)
        gates += pauli_gates(pa, a) + pauli_gates(pb, b)
        gates.append(g)
        gates += pauli_gates(qa, a) + pauli_gates(qb, b)
    return c.replace(gates=tuple(gates))


def pauli_twirl_ensemble(c: Circuit, num_twirls: int, seed: int) -> list[Circuit]:
    if num_twirls < 1:
        raise ContractError("num_twirls must be >= 1")
    rng = np.random.default_rng(seed % 2 ** 64)
    return [twirl_circuit(c, rng) for _ in range(num_twirls)]


def apply_measurement_mask(c: Circuit, mask: str) -> Circuit:
    """Insert x before every measurement whose clbit bit is set in ``mask``.

    ``mask`` follows the counts convention: leftmost character is the highest
    measured clbit.
    """
    clbits = c.measured_clbits
    if len(mask) != len(clbits):
        raise ContractError(f"mask width {len(mask)} != measured clbits {len(clbits)}")
    flip = {cb for i, cb in enumerate(clbits) if mask[len(mask) - 1 - i] == "1"}
    gates: list[Gate] = []
    for g in c.gates:
        if g.name == "measure" and g.clbit in flip:
            gates.append(Gate("x", g.qubits))
        gates.append(g)
    return c.replace(gates=tuple(gates))


def measurement_twirl_variants(c: Circuit, k: int, seed: int) -> list[tuple[Circuit, str]]:
    width = len(c.measured_clbits)
    if width == 0:
        raise ContractError("measurement twirling needs at least one measurement")
    if k < 1:
        raise ContractError("need at least one variant")
    rng = np.random.default_rng(seed % 2 ** 64)
    out = []
    for _ in range(k):
        mask = "".join("1" if b else "0" for b in rng.integers(0, 2, size=width))
        out.append((apply_measurement_mask(c, mask), mask))
    return out
