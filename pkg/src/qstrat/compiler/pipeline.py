"""Strategy-driven compilation: layout, routing, translation, optimization, suppression."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from ..backend import BackendModel
from ..circuit import Circuit, depth, size, two_qubit_count
from ..errors import CompileError
from ..metrics import MetricRecord, estimated_error
from ..strategy import StrategySpec
from .dd import insert_dd
from .layout import Layout, choose_layout
from .optimize import optimize
from .routing import route_with_layout
from .translate import translate
from .twirl import pauli_twirl_ensemble

Clock = Callable[[], float]

ENSEMBLE_ERR_WEIGHT = 10.0


def fixed_clock(seconds: float = 0.0) -> Clock:
    """Clock whose consecutive readings differ by exactly ``seconds``."""
    ticks = itertools.count()
    return lambda: next(ticks) * seconds


@dataclass
class CompiledCandidate:
    strategy: StrategySpec
    circuit: Circuit
    initial_layout: Layout
    final_layout: Layout
    metrics: MetricRecord
    notes: list[str] = field(default_factory=list)
    ensemble_scores: list[float] = field(default_factory=list)
    ensemble_choice: int | None = None

    @property
    def layout(self) -> Layout:
        return self.final_layout

    def to_dict(self) -> dict[str, Any]:
        return {
            "strategy": self.strategy.to_dict(),
            "circuit": self.circuit.to_dict(),
            "initial_layout": list(self.initial_layout),
            "final_layout": list(self.final_layout),
            "metrics": self.metrics.to_json(),
            "notes": list(self.notes),
            "ensemble_scores": list(self.ensemble_scores),
            "ensemble_choice": self.ensemble_choice,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> CompiledCandidate:
        return cls(
            strategy=StrategySpec.from_dict(d["strategy"]),
            circuit=Circuit.from_dict(d["circuit"]),
            initial_layout=tuple(d["initial_layout"]),
            final_layout=tuple(d["final_layout"]),
            metrics=MetricRecord.from_json(d["metrics"]),
            notes=list(d["notes"]),
            ensemble_scores=list(d["ensemble_scores"]),
            ensemble_choice=d["ensemble_choice"],
        )


def structural_metrics(c: Circuit, b: BackendModel) -> dict[str, float]:
    return {
        "depth": depth(c),
        "size": size(c),
        "2q": two_qubit_count(c),
        "width": c.num_qubits,
        "err": estimated_error(c, b),
    }


def ensemble_proxy(m: Mapping[str, float]) -> float:
    return m["depth"] + ENSEMBLE_ERR_WEIGHT * m["err"]


def select_ensemble_member(metrics: list[Mapping[str, float]]) -> int:
    """Index of the member minimizing the ensemble proxy; the lowest index wins ties."""
    proxies = [ensemble_proxy(m) for m in metrics]
    return min(range(len(proxies)), key=lambda i: (proxies[i], i))


def _core(c: Circuit, b: BackendModel, s: StrategySpec) -> tuple[Circuit, Layout, Layout]:
    layout = choose_layout(c, b, s.layout_method)
    routed, final = route_with_layout(c, b, layout, s.routing_method)
    out = optimize(translate(routed), s.optimization_level)
    if s.dynamical_decoupling:
        out = insert_dd(out, s.dd_sequence)
    for g in out.gates:
        if g.is_two_qubit and not b.is_coupled(*g.qubits):
            raise CompileError(f"internal: {g.name} on uncoupled pair {g.qubits}")
    return out, layout, final


def compile_circuit(
    c: Circuit,
    b: BackendModel,
    s: StrategySpec,
    clock: Clock = time.perf_counter,
) -> CompiledCandidate:
    """Compile ``c`` for ``b`` under strategy ``s``.

    With Pauli twirling, every ensemble member is compiled and the member with
    the lowest ``depth + 10 * err`` is kept (first one on ties).
    """
    start = clock()
    notes: list[str] = []
    if s.cutting:
        notes.append("cutting_unsupported")
    scores: list[float] = []
    choice = None
    if s.pauli_twirling:
        members = pauli_twirl_ensemble(translate(c), s.num_twirls, s.suppression_seed)
        compiled = [_core(member, b, s) for member in members]
        member_metrics = [structural_metrics(out, b) for out, _, _ in compiled]
        scores = [ensemble_proxy(m) for m in member_metrics]
        choice = select_ensemble_member(member_metrics)
        (out, layout, final), metrics = compiled[choice], member_metrics[choice]
    else:
        out, layout, final = _core(c, b, s)
        metrics = structural_metrics(out, b)
    metrics["time"] = clock() - start
    return CompiledCandidate(
        strategy=s,
        circuit=out.replace(name=c.name, metadata=c.metadata),
        initial_layout=layout,
        final_layout=final,
        metrics=MetricRecord(dict(metrics)),
        notes=notes,
        ensemble_scores=scores,
        ensemble_choice=choice,
    )


# ``compile`` shadows the builtin on purpose for the public API
compile = compile_circuit
