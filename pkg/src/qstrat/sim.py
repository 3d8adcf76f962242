"""Dense statevector evolution for small gate-list circuits."""

from __future__ import annotations

import math

import numpy as np

from .circuit import Circuit, Gate
from .errors import ExecutionError

_S2 = 1 / math.sqrt(2)

FIXED_1Q = {
    "h": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "t": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    "sx": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
}

# two-qubit matrices act on (first operand, second operand) with the first operand
# as the most significant index of the 4x4 matrix
FIXED_2Q = {
    "cx": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "cz": np.diag([1, 1, 1, -1]).astype(complex),
    "swap": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}


def gate_matrix(g: Gate) -> np.ndarray:
    if g.name in FIXED_1Q:
        return FIXED_1Q[g.name]
    if g.name in FIXED_2Q:
        return FIXED_2Q[g.name]
    if g.name in ("rx", "ry", "rz"):
        th = g.params[0]
        c, s = math.cos(th / 2), math.sin(th / 2)
        if g.name == "rx":
            return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
        if g.name == "ry":
            return np.array([[c, -s], [s, c]], dtype=complex)
        return np.array([[np.exp(-1j * th / 2), 0], [0, np.exp(1j * th / 2)]], dtype=complex)
    raise ExecutionError(f"no matrix for gate {g.name!r}")


def zero_state(n: int) -> np.ndarray:
    psi = np.zeros((2,) * n, dtype=complex)
    psi[(0,) * n] = 1.0
    return psi


def apply_matrix(psi: np.ndarray, u: np.ndarray, qubits: tuple[int, ...]) -> np.ndarray:
    """Apply ``u`` to tensor-shaped state ``psi`` on ``qubits`` (axis k is qubit k)."""
    k = len(qubits)
    u = u.reshape((2,) * (2 * k))
    out = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), list(qubits)))
    return np.moveaxis(out, list(range(k)), list(qubits))


def apply_gate(psi: np.ndarray, g: Gate) -> np.ndarray:
    if g.name in ("barrier", "measure"):
        return psi
    return apply_matrix(psi, gate_matrix(g), g.qubits)


def unitary_gates(c: Circuit) -> list[Gate]:
    """Non-measure gates, after checking that measurements are terminal per qubit."""
    measured: set[int] = set()
    out = []
    for g in c.gates:
        if g.name == "measure":
            measured.add(g.qubits[0])
            continue
        if g.name != "barrier" and measured.intersection(g.qubits):
            raise ExecutionError(f"{g.name} on {g.qubits} follows a measurement; only terminal measurements are supported")
        out.append(g)
    return out


def statevector(c: Circuit) -> np.ndarray:
    """Final state (flat, index bit k = qubit k) ignoring measurements."""
    psi = zero_state(c.num_qubits)
    for g in unitary_gates(c):
        psi = apply_gate(psi, g)
    return tensor_to_flat(psi)


def tensor_to_flat(psi: np.ndarray) -> np.ndarray:
    # axis k -> bit k of the flat index (little-endian)
    n = psi.ndim
    return np.transpose(psi, list(range(n - 1, -1, -1))).reshape(-1)


def measurement_map(c: Circuit) -> list[tuple[int, int]]:
    """(qubit, clbit) pairs, last write wins per clbit, ordered by clbit."""
    by_clbit: dict[int, int] = {}
    for g in c.gates:
        if g.name == "measure":
            by_clbit[g.clbit] = g.qubits[0]
    return sorted(((q, cb) for cb, q in by_clbit.items()), key=lambda t: t[1])


def marginal_probabilities(psi: np.ndarray, qubits: list[int]) -> np.ndarray:
    """Probabilities over ``qubits`` from a tensor-shaped state.

    Result index bit i corresponds to ``qubits[i]``.
    """
    probs = np.abs(psi) ** 2
    n = psi.ndim
    keep = list(qubits)
    drop = tuple(a for a in range(n) if a not in keep)
    marg = probs.sum(axis=drop) if drop else probs
    # remaining axes are in ascending qubit order; reorder to `qubits` then flatten little-endian
    remaining = sorted(keep)
    marg = np.transpose(marg, [remaining.index(q) for q in keep])
    m = len(keep)
    return np.transpose(marg, list(range(m - 1, -1, -1))).reshape(-1) if m else np.array([probs.sum()])


def clbit_distribution(c: Circuit) -> dict[str, float]:
    """Exact noiseless outcome distribution over measured clbits (leftmost = highest clbit)."""
    mmap = measurement_map(c)
    if not mmap:
        raise ExecutionError("circuit has no measurements")
    psi = zero_state(c.num_qubits)
    for g in unitary_gates(c):
        psi = apply_gate(psi, g)
    probs = marginal_probabilities(psi, [q for q, _ in mmap])
    width = len(mmap)
    return {format(i, f"0{width}b"): float(p) for i, p in enumerate(probs) if p > 1e-15}


def operator(c: Circuit) -> np.ndarray:
    """Full unitary of the non-measure part (column j = image of basis state j)."""
    n = c.num_qubits
    dim = 2 ** n
    cols = []
    gates = unitary_gates(c)
    for j in range(dim):
        psi = np.zeros(dim, dtype=complex)
        psi[j] = 1
        psi = np.transpose(psi.reshape((2,) * n), list(range(n - 1, -1, -1)))
        for g in gates:
            psi = apply_gate(psi, g)
        cols.append(tensor_to_flat(psi))
    return np.stack(cols, axis=1)


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, atol: float = 1e-9) -> bool:
    a = np.asarray(a).reshape(-1)
    b = np.asarray(b).reshape(-1)
    k = int(np.argmax(np.abs(b)))
    if abs(b[k]) < atol:
        return bool(np.allclose(a, b, atol=atol))
    phase = a[k] / b[k]
    if not math.isclose(abs(phase), 1.0, abs_tol=1e-7):
        return False
    return bool(np.allclose(a, phase * b, atol=atol))
