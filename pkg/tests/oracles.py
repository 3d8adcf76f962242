"""Independent reference implementations used to check the package.

Nothing here imports package internals beyond the plain data types, so a bug
in the implementation cannot leak into its own oracle.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

R2 = 1 / math.sqrt(2)


def one_qubit_matrix(name: str, params: Sequence[float] = ()) -> np.ndarray:
    if name == "h":
        return np.array([[R2, R2], [R2, -R2]], dtype=complex)
    if name == "x":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if name == "y":
        return np.array([[0, -1j], [1j, 0]], dtype=complex)
    if name == "z":
        return np.array([[1, 0], [0, -1]], dtype=complex)
    if name == "s":
        return np.diag([1, 1j])
    if name == "sdg":
        return np.diag([1, -1j])
    if name == "t":
        return np.diag([1, np.exp(1j * math.pi / 4)])
    if name == "sx":
        # principal square root of X
        vals, vecs = np.linalg.eigh(np.array([[0, 1], [1, 0]], dtype=complex))
        return vecs @ np.diag(np.sqrt(vals.astype(complex))) @ vecs.conj().T
    (th,) = params
    # exponentials of Paulis, built from the definition exp(-i th P / 2)
    pauli = {"rx": one_qubit_matrix("x"), "ry": one_qubit_matrix("y"), "rz": one_qubit_matrix("z")}[name]
    return math.cos(th / 2) * np.eye(2) - 1j * math.sin(th / 2) * pauli


def two_qubit_table(name: str, a: int, b: int) -> tuple[int, int]:
    """Classical action on (a, b) basis bits for the permutation gates."""
    if name == "cx":
        return a, b ^ a
    if name == "swap":
        return b, a
    raise KeyError(name)


def full_operator(n: int, gates) -> np.ndarray:
    """Dense 2^n operator of the unitary gates; bit k of the basis index is qubit k."""
    dim = 2 ** n
    total = np.eye(dim, dtype=complex)
    for g in gates:
        if g.name in ("barrier", "measure"):
            continue
        m = np.zeros((dim, dim), dtype=complex)
        if len(g.qubits) == 1:
            (q,) = g.qubits
            u = one_qubit_matrix(g.name, g.params)
            for i in range(dim):
                bit = (i >> q) & 1
                for out in (0, 1):
                    j = (i & ~(1 << q)) | (out << q)
                    m[j, i] += u[out, bit]
        else:
            qa, qb = g.qubits
            for i in range(dim):
                a, b = (i >> qa) & 1, (i >> qb) & 1
                if g.name == "cz":
                    m[i, i] = -1 if a and b else 1
                    continue
                na, nb = two_qubit_table(g.name, a, b)
                j = (i & ~(1 << qa) & ~(1 << qb)) | (na << qa) | (nb << qb)
                m[j, i] = 1
        total = m @ total
    return total


def measured_distribution(c) -> dict[str, float]:
    """Distribution over the measured clbits, highest clbit leftmost, from the dense operator."""
    meas = sorted(((g.clbit, g.qubits[0]) for g in c.gates if g.name == "measure"))
    psi = full_operator(c.num_qubits, c.gates)[:, 0]
    out: dict[str, float] = {}
    for i, amp in enumerate(psi):
        p = abs(amp) ** 2
        if p < 1e-14:
            continue
        key = "".join(str((i >> q) & 1) for _, q in reversed(meas))
        out[key] = out.get(key, 0.0) + p
    return {k: v for k, v in sorted(out.items()) if v > 1e-12}


def same_distribution(a: dict[str, float], b: dict[str, float], tol: float = 1e-9) -> bool:
    keys = set(a) | set(b)
    return all(abs(a.get(k, 0.0) - b.get(k, 0.0)) <= tol for k in keys)


def dominates(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def brute_front(points) -> list[int]:
    return [i for i, p in enumerate(points) if not any(dominates(q, p) for q in points)]


def ridge_mean(x: np.ndarray, y: np.ndarray, alpha: float, sigma: float) -> np.ndarray:
    """Posterior mean as the solution of an augmented least-squares problem."""
    d = x.shape[1]
    a = np.vstack([x / sigma, math.sqrt(alpha) * np.eye(d)])
    rhs = np.concatenate([y / sigma, np.zeros(d)])
    return np.linalg.lstsq(a, rhs, rcond=None)[0]


def exact_survival(errors: Sequence[float]) -> float:
    """1 - prod(1 - e) in exact rational arithmetic, rounded once."""
    prod = Fraction(1)
    for e in errors:
        prod *= 1 - Fraction(e)
    return float(1 - prod)


def ecdf_distances(x: Sequence[float], y: Sequence[float]) -> tuple[float, float, float]:
    """KS, W1 and the unweighted CvM-style integral by dense evaluation between breakpoints."""
    xs, ys = np.sort(np.asarray(x, float)), np.sort(np.asarray(y, float))
    grid = np.unique(np.concatenate([xs, ys]))

    def f(s, z):
        return np.count_nonzero(s <= z) / len(s)

    ks = max(abs(f(xs, z) - f(ys, z)) for z in grid)
    w1 = cvm = 0.0
    for lo, hi in zip(grid[:-1], grid[1:]):
        d = f(xs, lo) - f(ys, lo)
        w1 += abs(d) * (hi - lo)
        cvm += d * d * (hi - lo)
    return ks, w1, cvm


def flip_matrix(readout: Sequence[float]) -> np.ndarray:
    """Full 2^w assignment matrix as a Kronecker product, bit 0 rightmost."""
    m = np.ones((1, 1))
    for r in reversed(readout):
        m = np.kron(m, np.array([[1 - r, r], [r, 1 - r]]))
    return m
