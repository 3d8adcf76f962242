"""Metric records, the survival-product error proxy and the weighted objective."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

from .backend import BackendModel
from .circuit import Circuit
from .errors import ContractError

DEFAULT_WEIGHTS: dict[str, float] = {"depth": 1.0, "2q": 2.0, "err": 10.0, "time": 0.1}
PARETO_KEYS = ("depth", "2q", "err")


def is_finite_number(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


@dataclass
class MetricRecord(Mapping[str, Any]):
    """Named metric values.

    A value is a real number (finite or not), ``None`` for an explicitly
    missing metric, or any other object for free-form summaries which the
    objective ignores. ``failed`` marks a candidate that could not be evaluated.
    """

    values: dict[str, Any] = field(default_factory=dict)
    failed: bool = False

    def __post_init__(self) -> None:
        for k in self.values:
            if not isinstance(k, str) or not k:
                raise ValueError(f"metric keys must be non-empty strings, got {k!r}")

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def finite(self, key: str) -> float | None:
        v = self.values.get(key)
        return float(v) if is_finite_number(v) else None

    def pareto_tuple(self) -> tuple[float, float, float] | None:
        vals = [self.finite(k) for k in PARETO_KEYS]
        if self.failed or any(v is None for v in vals):
            return None
        return tuple(vals)  # type: ignore[return-value]

    def to_json(self) -> dict[str, Any]:
        return {"values": {k: jsonable(v) for k, v in sorted(self.values.items())}, "failed": self.failed}

    @classmethod
    def from_json(cls, d: Mapping[str, Any]) -> MetricRecord:
        return cls({k: from_jsonable(v) for k, v in d["values"].items()}, bool(d.get("failed", False)))


def jsonable(v: Any) -> Any:
    """Strict-JSON form: non-finite floats become tagged strings."""
    if isinstance(v, float) and not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    return v


def from_jsonable(v: Any) -> Any:
    if v in ("nan", "inf", "-inf"):
        return float(v)
    return v


def resolve_weights(overrides: Mapping[str, float] | None = None) -> dict[str, float]:
    w = dict(DEFAULT_WEIGHTS)
    for k, v in (overrides or {}).items():
        if not is_finite_number(v):
            raise ContractError(f"weight {k!r} must be a finite number, got {v!r}")
        w[str(k)] = float(v)
    return w


def operation_errors(c: Circuit, b: BackendModel, layout: Mapping[int, int] | None = None) -> list[float]:
    """Per-operation error probabilities from calibration data (fallbacks when absent)."""
    phys = (lambda q: layout[q]) if layout is not None else (lambda q: q)
    errs = []
    for g in c.gates:
        if g.name == "barrier":
            continue
        if g.name == "measure":
            errs.append(b.readout_error(phys(g.qubits[0])))
        elif g.is_two_qubit:
            errs.append(b.two_qubit_error(phys(g.qubits[0]), phys(g.qubits[1])))
        else:
            errs.append(b.sq_error(phys(g.qubits[0])))
    return errs


def survival_error(errors: list[float]) -> float:
    survive = 1.0
    for e in errors:
        survive *= 1.0 - e
    return 1.0 - survive


def estimated_error(c: Circuit, b: BackendModel, layout: Mapping[int, int] | None = None) -> float:
    return survival_error(operation_errors(c, b, layout))


def _terms(m: Mapping[str, Any], w: Mapping[str, float]) -> list[float]:
    return [wk * float(m[k]) for k, wk in w.items() if k in m and is_finite_number(m[k])]


def score(m: Mapping[str, Any], w: Mapping[str, float] | None = None) -> float:
    """Weighted sum over the finite metrics named in ``w``; 0 when none qualify."""
    terms = _terms(m, DEFAULT_WEIGHTS if w is None else w)
    return math.fsum(terms)


def finite_safe_score(m: Mapping[str, Any], w: Mapping[str, float] | None = None) -> float:
    """Like :func:`score` but +inf for failed records or records with no finite objective term."""
    if getattr(m, "failed", False):
        return math.inf
    terms = _terms(m, DEFAULT_WEIGHTS if w is None else w)
    if not terms:
        return math.inf
    return math.fsum(terms)


def comparison_ratios(base: Mapping[str, Any], selected: Mapping[str, Any]) -> dict[str, float | None]:
    out: dict[str, float | None] = {}
    for key, name in (("depth", "R_depth"), ("2q", "R_2q")):
        b, s = base.get(key), selected.get(key)
        out[name] = float(s) / float(b) if is_finite_number(b) and is_finite_number(s) and b != 0 else None
    b, s = base.get("err"), selected.get("err")
    out["delta_err"] = float(s) - float(b) if is_finite_number(b) and is_finite_number(s) else None
    return out
