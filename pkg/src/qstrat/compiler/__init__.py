"""Compilation passes and the strategy-driven pipeline."""

from .dd import insert_dd
from .layout import choose_layout, default_layout, noise_aware_layout, trivial_layout
from .optimize import optimize
from .pipeline import CompiledCandidate, compile_circuit, fixed_clock, select_ensemble_member
from .routing import route, route_with_layout
from .translate import translate
from .twirl import measurement_twirl_variants, pauli_twirl_ensemble

__all__ = [
    "CompiledCandidate",
    "choose_layout",
    "compile_circuit",
    "default_layout",
    "fixed_clock",
    "insert_dd",
    "measurement_twirl_variants",
    "noise_aware_layout",
    "optimize",
    "pauli_twirl_ensemble",
    "route",
    "route_with_layout",
    "select_ensemble_member",
    "translate",
    "trivial_layout",
]
