"""Cross-backend evaluation matrix: one adjustment run per backend, one cell per (circuit, backend)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .circuit import Circuit
from .dataset import load_dataset
from .errors import ConflictError, ContractError, QStratError
from .metrics import jsonable
from .orchestrator import AdjustOptions, adjust

MATRIX_FORMAT = "qstrat-matrix-v1"


@dataclass
class MatrixReport:
    circuits: list[str]
    columns: list[dict[str, Any]] = field(default_factory=list)
    timestamp: str = ""

    @property
    def cells(self) -> list[dict[str, Any]]:
        return [cell for col in self.columns for cell in col["cells"]]

    def to_dict(self) -> dict[str, Any]:
        return {
            "format": MATRIX_FORMAT,
            "tool_version": __version__,
            "timestamp": self.timestamp,
            "circuits": list(self.circuits),
            "backends": [col["backend_spec"] for col in self.columns],
            "columns": self.columns,
        }


def _cell(rec: Any, backend_spec: str) -> dict[str, Any]:
    return {
        "circuit": rec.circuit,
        "backend": backend_spec,
        "selected_label": rec.selected.label,
        "selected_strategy": rec.selected.to_dict(),
        "selected_metrics": rec.selected_metrics.to_json()["values"],
        "baseline_metrics": rec.baseline_metrics.to_json()["values"],
        "ratios": jsonable(rec.ratios),
        "evaluated_candidates": rec.evaluated,
    }


def run_matrix(
    dataset: str | Path | Sequence[Circuit],
    backend_specs: Sequence[str],
    options: AdjustOptions | None = None,
    timestamp: str | None = None,
) -> MatrixReport:
    """Adjust the dataset against every backend; a failing backend only fails its own column."""
    if not backend_specs:
        raise ContractError("matrix needs at least one backend spec")
    circuits = load_dataset(dataset) if isinstance(dataset, (str, Path)) else list(dataset)
    stamp = timestamp or datetime.now(timezone.utc).isoformat()
    report = MatrixReport([c.name for c in circuits], timestamp=stamp)
    for spec in backend_specs:
        try:
            w = adjust(circuits, spec, options=options, timestamp=stamp)
        except QStratError as exc:
            report.columns.append({"backend_spec": spec, "status": "error", "error": f"{type(exc).__name__}: {exc}",
                                   "metadata": None, "diagnostics": None, "cells": []})
            continue
        meta = {k: v for k, v in w.metadata.items() if k != "timestamp"}
        report.columns.append({
            "backend_spec": spec,
            "status": "ok",
            "error": None,
            "metadata": jsonable(meta),
            "diagnostics": jsonable(w.diagnostics),
            "cells": [_cell(r, spec) for r in w.selections],
        })
    return report


def write_matrix(report: MatrixReport, out: str | Path, overwrite: bool = False) -> Path:
    out = Path(out)
    if out.exists() and not overwrite:
        raise ConflictError(f"{out} already exists; pass overwrite to replace it")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n")
    return out
