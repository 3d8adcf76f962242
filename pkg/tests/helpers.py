"""Shared builders and hypothesis strategies for the test suite."""

from __future__ import annotations

import math

from hypothesis import strategies as st

from qstrat.backend import BackendModel, QubitCalibration
from qstrat.circuit import Circuit, Gate

FIXED_1Q = ("h", "x", "y", "z", "s", "sdg", "t", "sx")
ROT_1Q = ("rx", "ry", "rz")
GATES_2Q = ("cx", "cz", "swap")


def line_backend(n: int, readout: float = 0.02, sq: float = 1e-3, cx: float = 1e-2) -> BackendModel:
    cal = tuple(QubitCalibration(readout, 100.0, 80.0, sq) for _ in range(n))
    edges = frozenset((i, i + 1) for i in range(n - 1))
    return BackendModel(f"line{n}", n, edges, cal, {e: cx for e in edges})


def uniform_backend(n: int, edges, readout: float = 0.0, sq: float = 0.0, cx: float = 0.0, name: str = "uniform"):
    cal = tuple(QubitCalibration(readout, 100.0, 80.0, sq) for _ in range(n))
    return BackendModel(name, n, frozenset(edges), cal, {e: cx for e in edges})


@st.composite
def gates(draw, n: int):
    kind = draw(st.sampled_from(("fixed", "rot", "two") if n > 1 else ("fixed", "rot")))
    if kind == "fixed":
        return Gate(draw(st.sampled_from(FIXED_1Q)), (draw(st.integers(0, n - 1)),))
    if kind == "rot":
        th = draw(st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False))
        return Gate(draw(st.sampled_from(ROT_1Q)), (draw(st.integers(0, n - 1)),), (th,))
    a, b = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
    return Gate(draw(st.sampled_from(GATES_2Q)), (a, b))


@st.composite
def circuits(draw, min_qubits: int = 1, max_qubits: int = 4, max_gates: int = 14, measured: bool = True):
    n = draw(st.integers(min_qubits, max_qubits))
    body = draw(st.lists(gates(n), max_size=max_gates))
    tail = [Gate("measure", (q,), clbit=q) for q in range(n)] if measured else []
    return Circuit("rand", n, n if measured else 0, tuple(body + tail))
