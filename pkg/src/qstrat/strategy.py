"""Immutable strategy records and the default candidate space."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from typing import Any, Mapping

from .circuit import canonical_json
from .errors import ValidationError

LAYOUT_METHODS = ("default", "trivial", "noise_aware")
ROUTING_METHODS = ("basic", "lookahead")
TRANSLATION_METHODS = ("default",)
DD_SEQUENCES = ("XX", "XY4")

# the four compilation variants swept at every optimization level
COMPILATION_VARIANTS = (
    ("default", "basic"),
    ("noise_aware", "basic"),
    ("default", "lookahead"),
    ("trivial", "basic"),
)


@dataclass(frozen=True)
class StrategySpec:
    # compilation
    optimization_level: int = 1
    layout_method: str = "default"
    routing_method: str = "basic"
    translation_method: str = "default"
    seed: int = 0
    # suppression
    pauli_twirling: bool = False
    num_twirls: int = 4
    dynamical_decoupling: bool = False
    dd_sequence: str = "XX"
    measurement_twirling: bool = False
    suppression_seed: int = 0
    # mitigation
    readout_mitigation: bool = False
    zne: bool = False
    zne_scale_factors: tuple[int, ...] = (1, 3, 5)
    zne_degree: int = 1
    # cutting
    cutting: bool = False
    max_subcircuit_qubits: int | None = None
    # runtime metadata
    resilience_level: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "zne_scale_factors", tuple(int(f) for f in self.zne_scale_factors))
        if self.optimization_level not in (0, 1, 2, 3):
            raise ValidationError(f"optimization_level must be 0..3, got {self.optimization_level}")
        if self.layout_method not in LAYOUT_METHODS:
            raise ValidationError(f"unknown layout_method {self.layout_method!r}")
        if self.routing_method not in ROUTING_METHODS:
            raise ValidationError(f"unknown routing_method {self.routing_method!r}")
        if self.translation_method not in TRANSLATION_METHODS:
            raise ValidationError(f"unknown translation_method {self.translation_method!r}")
        if self.dd_sequence not in DD_SEQUENCES:
            raise ValidationError(f"unknown dd_sequence {self.dd_sequence!r}")
        if self.num_twirls < 1:
            raise ValidationError("num_twirls must be positive")
        for name in ("seed", "suppression_seed"):
            v = getattr(self, name)
            if not -(2 ** 63) <= v < 2 ** 64:
                raise ValidationError(f"{name} must fit in 64 bits")
        f = self.zne_scale_factors
        if not f or f[0] != 1 or any(x % 2 == 0 for x in f) or any(a >= b for a, b in zip(f, f[1:])):
            raise ValidationError(f"zne_scale_factors must be odd, strictly increasing and start at 1: {f}")
        if not 1 <= self.zne_degree < len(f):
            raise ValidationError(f"zne_degree must be in [1, {len(f) - 1}], got {self.zne_degree}")
        if self.max_subcircuit_qubits is not None and self.max_subcircuit_qubits < 1:
            raise ValidationError("max_subcircuit_qubits must be positive")

    def to_dict(self) -> dict[str, Any]:
        d = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        d["zne_scale_factors"] = list(self.zne_scale_factors)
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> StrategySpec:
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValidationError(f"unknown strategy fields {sorted(unknown)}")
        return cls(**{k: (tuple(v) if k == "zne_scale_factors" else v) for k, v in d.items()})

    def canonical(self) -> str:
        return canonical_json(self.to_dict())

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()

    def replace(self, **changes: Any) -> StrategySpec:
        return dataclasses.replace(self, **changes)

    @property
    def group(self) -> str:
        if self.cutting:
            return "cutting"
        if self.readout_mitigation or self.zne:
            return "mitigation"
        if self.pauli_twirling or self.dynamical_decoupling or self.measurement_twirling:
            return "suppression"
        return "compilation"

    @property
    def label(self) -> str:
        parts = [f"L{self.optimization_level}", self.layout_method, self.routing_method]
        for flag, tag in (
            (self.pauli_twirling, f"twirl{self.num_twirls}"),
            (self.dynamical_decoupling, f"dd-{self.dd_sequence}"),
            (self.measurement_twirling, "mtwirl"),
            (self.readout_mitigation, "readout"),
            (self.zne, "zne" + "-".join(str(x) for x in self.zne_scale_factors)),
            (self.cutting, "cut"),
        ):
            if flag:
                parts.append(tag)
        return "/".join(parts)


def strategy_json(s: StrategySpec) -> str:
    return json.dumps(s.to_dict(), sort_keys=True)


def default_candidates(max_candidates: int = 24, seed: int = 0) -> list[StrategySpec]:
    """Compilation sweep, then suppression, mitigation and cutting variants; deduplicated and truncated."""
    if max_candidates < 1:
        raise ValidationError("max_candidates must be >= 1")
    base = StrategySpec(seed=seed, suppression_seed=seed)
    raw: list[StrategySpec] = []
    for level in (0, 1, 2, 3):
        for layout, routing in COMPILATION_VARIANTS:
            raw.append(base.replace(optimization_level=level, layout_method=layout, routing_method=routing))
    mid = base.replace(optimization_level=2)
    raw += [
        mid.replace(pauli_twirling=True),
        mid.replace(dynamical_decoupling=True),
        mid.replace(pauli_twirling=True, dynamical_decoupling=True),
        mid.replace(measurement_twirling=True),
        mid.replace(readout_mitigation=True),
        mid.replace(zne=True),
        mid.replace(cutting=True),
    ]
    # frozen specs hash over every field, the same content the canonical form encodes
    return list(dict.fromkeys(raw))[:max_candidates]


BASELINE = StrategySpec(optimization_level=1, layout_method="default", routing_method="basic")


def baseline_strategy(seed: int = 0) -> StrategySpec:
    return BASELINE.replace(seed=seed, suppression_seed=seed)
