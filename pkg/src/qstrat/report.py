"""Markdown/HTML rendering of an evaluation matrix document."""

from __future__ import annotations

import html
import json
import statistics
from pathlib import Path
from typing import Any

from .dataset import prepare_output_dir
from .errors import ReportError
from .matrix import MATRIX_FORMAT

MISSING = "n/a"
RATIO_KEYS = ("R_depth", "R_2q", "delta_err")
METRIC_KEYS = ("depth", "2q", "err", "time", "entropy", "p_max")
DISTANCE_KEYS = ("ks", "w1", "cvm")


def _require(cond: bool, message: str, location: str) -> None:
    if not cond:
        raise ReportError(message, location)


def parse_matrix(text: str) -> dict[str, Any]:
    """Parse and structurally validate a matrix document; errors carry a JSON location."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReportError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from exc
    _require(isinstance(doc, dict), "matrix must be a JSON object", "$")
    _require(doc.get("format") == MATRIX_FORMAT, f"expected format {MATRIX_FORMAT!r}", "$.format")
    _require(isinstance(doc.get("columns"), list), "missing 'columns' list", "$.columns")
    _require(isinstance(doc.get("circuits", []), list), "'circuits' must be a list", "$.circuits")
    for i, col in enumerate(doc["columns"]):
        loc = f"$.columns[{i}]"
        _require(isinstance(col, dict), "column must be an object", loc)
        _require(isinstance(col.get("backend_spec"), str), "missing string 'backend_spec'", f"{loc}.backend_spec")
        _require(isinstance(col.get("cells", []), list), "'cells' must be a list", f"{loc}.cells")
        for j, cell in enumerate(col.get("cells", [])):
            cloc = f"{loc}.cells[{j}]"
            _require(isinstance(cell, dict), "cell must be an object", cloc)
            _require(isinstance(cell.get("circuit"), str), "missing string 'circuit'", f"{cloc}.circuit")
            for key in ("ratios", "selected_metrics", "baseline_metrics"):
                _require(isinstance(cell.get(key, {}), dict), f"'{key}' must be an object", f"{cloc}.{key}")
        diag = col.get("diagnostics")
        _require(diag is None or isinstance(diag, dict), "'diagnostics' must be an object", f"{loc}.diagnostics")
    return doc


def _number(v: Any) -> float | None:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        return None
    return float(v) if v == v and abs(v) != float("inf") else None


def _fmt(v: Any) -> str:
    x = _number(v)
    if x is not None:
        return f"{x:.6g}"
    return MISSING if v is None or isinstance(v, float) else str(v)


def aggregate_ratios(doc: dict[str, Any]) -> dict[str, dict[str, Any]]:
    """Mean and median of each comparison ratio over the cells where it is defined."""
    out = {}
    for key in RATIO_KEYS:
        values = [
            x for col in doc["columns"] for cell in col.get("cells", [])
            if (x := _number(cell.get("ratios", {}).get(key))) is not None
        ]
        out[key] = {
            "n": len(values),
            "mean": statistics.fmean(values) if values else None,
            "median": statistics.median(values) if values else None,
        }
    return out


def _tables(doc: dict[str, Any]) -> list[tuple[str, list[str], list[list[str]]]]:
    tables = []
    circuits = list(doc.get("circuits", []))
    for col in doc["columns"]:
        spec = col["backend_spec"]
        cells = {c["circuit"]: c for c in col.get("cells", [])}
        names = circuits + sorted(set(cells) - set(circuits))
        header = ["circuit", "selected"] + [f"{k}" for k in METRIC_KEYS] + list(RATIO_KEYS)
        rows = []
        for name in names:
            cell = cells.get(name)
            if cell is None:
                rows.append([name] + [MISSING] * (len(header) - 1))
                continue
            metrics = cell.get("selected_metrics", {})
            ratios = cell.get("ratios", {})
            rows.append(
                [name, str(cell.get("selected_label", MISSING))]
                + [_fmt(metrics.get(k)) for k in METRIC_KEYS]
                + [_fmt(ratios.get(k)) for k in RATIO_KEYS]
            )
        title = f"Selections on {spec}"
        if col.get("status") == "error":
            title += f" (failed: {col.get('error')})"
        tables.append((title, header, rows))

    agg = aggregate_ratios(doc)
    tables.append((
        "Aggregate comparison ratios",
        ["ratio", "cells", "mean", "median"],
        [[k, str(v["n"]), _fmt(v["mean"]), _fmt(v["median"])] for k, v in agg.items()],
    ))

    diag_rows = []
    for col in doc["columns"]:
        for metric, entry in sorted((col.get("diagnostics") or {}).items()):
            entry = entry if isinstance(entry, dict) else {}
            diag_rows.append(
                [col["backend_spec"], metric]
                + [_fmt(entry.get(k)) for k in DISTANCE_KEYS]
                + [", ".join(str(n) for n in entry.get("notes", [])) or "-"]
            )
    tables.append(("Baseline vs selected diagnostics", ["backend", "metric", "KS", "W1", "CvM", "notes"], diag_rows))
    return tables


def render_markdown(doc: dict[str, Any], source_name: str = "matrix.json") -> str:
    lines = ["# Strategy selection report", ""]
    lines.append(f"Backends: {len(doc['columns'])}. Circuits: {len(doc.get('circuits', []))}.")
    lines.append(f"Input matrix copied verbatim to `{source_name}`.")
    for title, header, rows in _tables(doc):
        lines += ["", f"## {title}", ""]
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "---|" * len(header))
        if not rows:
            lines.append("| " + " | ".join([MISSING] * len(header)) + " |")
        for row in rows:
            lines.append("| " + " | ".join(cell.replace("|", "\\|") for cell in row) + " |")
    return "\n".join(lines) + "\n"


def render_html(doc: dict[str, Any], source_name: str = "matrix.json") -> str:
    esc = html.escape
    parts = [
        "<!DOCTYPE html>",
        '<html><head><meta charset="utf-8"><title>Strategy selection report</title>',
        "<style>table{border-collapse:collapse}td,th{border:1px solid #999;padding:2px 6px}</style>",
        "</head><body>",
        "<h1>Strategy selection report</h1>",
        f"<p>Backends: {len(doc['columns'])}. Circuits: {len(doc.get('circuits', []))}. "
        f"Input matrix copied verbatim to <code>{esc(source_name)}</code>.</p>",
    ]
    for title, header, rows in _tables(doc):
        parts.append(f"<h2>{esc(title)}</h2><table>")
        parts.append("<tr>" + "".join(f"<th>{esc(h)}</th>" for h in header) + "</tr>")
        for row in rows or [[MISSING] * len(header)]:
            parts.append("<tr>" + "".join(f"<td>{esc(c)}</td>" for c in row) + "</tr>")
        parts.append("</table>")
    parts.append("</body></html>")
    return "\n".join(parts) + "\n"


def write_report(matrix_path: str | Path, out: str | Path, html_output: bool = False,
                 overwrite: bool = False) -> list[Path]:
    """Write report.md (and report.html) plus a byte-for-byte copy of the input matrix."""
    matrix_path = Path(matrix_path)
    try:
        raw = matrix_path.read_bytes()
    except OSError as exc:
        raise ReportError(f"cannot read matrix: {exc}", str(matrix_path)) from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ReportError("matrix is not UTF-8", f"byte {exc.start}") from exc
    doc = parse_matrix(text)
    out = Path(out)
    prepare_output_dir(out, overwrite)
    written = [out / "report.md", out / "matrix.json"]
    written[0].write_text(render_markdown(doc))
    written[1].write_bytes(raw)
    if html_output:
        written.append(out / "report.html")
        written[2].write_text(render_html(doc))
    return written
