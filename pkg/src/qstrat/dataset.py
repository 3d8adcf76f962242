"""Dataset directories: a JSON index plus one artifact file per circuit."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .circuit import Circuit, format_gates_text, make_circuit, parse_gates_text
from .errors import (
    ArtifactParseError,
    ConflictError,
    MalformedEntryError,
    MissingIndexError,
    UnsafePathError,
    ValidationError,
)

INDEX_NAME = "index.json"
INDEX_VERSION = 1
FORMATS = ("native-v1", "gates-v1")

_UNSAFE_CHARS = re.compile(r"[^A-Za-z0-9_.-]")


@dataclass
class IndexEntry:
    name: str
    path: str
    format: str = "native-v1"
    metadata: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "path": self.path, "format": self.format, "metadata": dict(self.metadata)}


@dataclass
class DatasetIndex:
    entries: list[IndexEntry]
    version: int = INDEX_VERSION

    def to_dict(self) -> dict[str, Any]:
        return {"version": self.version, "entries": [e.to_dict() for e in self.entries]}


def check_artifact_path(path: str) -> None:
    if (
        not path
        or path in (".", "..")
        or "/" in path
        or "\\" in path
        or ".." in path
        or Path(path).is_absolute()
    ):
        raise UnsafePathError(f"artifact path {path!r} is not a safe single component")


def safe_component(name: str) -> str:
    """Filesystem-safe single path component derived from ``name``."""
    cleaned = _UNSAFE_CHARS.sub("_", name).strip(".") or "circuit"
    return cleaned.replace("..", "_")


def prepare_output_dir(path: Path, overwrite: bool) -> None:
    if path.exists():
        if not path.is_dir():
            raise ConflictError(f"{path} exists and is not a directory")
        if any(path.iterdir()) and not overwrite:
            raise ConflictError(f"{path} already exists; pass overwrite to replace it")
    path.mkdir(parents=True, exist_ok=True)


def save_dataset(circuits: Sequence[Circuit], directory: str | Path, overwrite: bool = False) -> DatasetIndex:
    names = [c.name for c in circuits]
    if len(set(names)) != len(names):
        raise ValidationError("circuit names must be unique within a dataset")
    out = Path(directory)
    prepare_output_dir(out, overwrite)
    entries = []
    for i, c in enumerate(circuits):
        fname = f"{i:03d}_{safe_component(c.name)}.json"
        (out / fname).write_text(json.dumps(c.to_dict(), indent=2, sort_keys=True) + "\n")
        entries.append(IndexEntry(c.name, fname, "native-v1", {str(k): str(v) for k, v in c.metadata.items()}))
    index = DatasetIndex(entries)
    (out / INDEX_NAME).write_text(json.dumps(index.to_dict(), indent=2, sort_keys=True) + "\n")
    return index


def read_index(directory: str | Path) -> DatasetIndex:
    ipath = Path(directory) / INDEX_NAME
    if not ipath.is_file():
        raise MissingIndexError(f"no {INDEX_NAME} in {directory}")
    try:
        doc = json.loads(ipath.read_text())
    except json.JSONDecodeError as exc:
        raise MalformedEntryError(f"{ipath}: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("entries"), list):
        raise MalformedEntryError(f"{ipath}: expected an object with an 'entries' list")
    if doc.get("version", INDEX_VERSION) != INDEX_VERSION:
        raise MalformedEntryError(f"{ipath}: unsupported index version {doc.get('version')!r}")
    entries = []
    seen = set()
    for i, raw in enumerate(doc["entries"]):
        if not isinstance(raw, dict) or not isinstance(raw.get("name"), str) or not isinstance(raw.get("path"), str):
            raise MalformedEntryError(f"entries[{i}]: needs string 'name' and 'path'")
        fmt = raw.get("format", "native-v1")
        if fmt not in FORMATS:
            raise MalformedEntryError(f"entries[{i}]: unknown format {fmt!r}")
        if raw["name"] in seen:
            raise MalformedEntryError(f"entries[{i}]: duplicate name {raw['name']!r}")
        seen.add(raw["name"])
        # path safety is checked before any artifact access
        check_artifact_path(raw["path"])
        meta = raw.get("metadata") or {}
        if not isinstance(meta, dict):
            raise MalformedEntryError(f"entries[{i}]: metadata must be an object")
        entries.append(IndexEntry(raw["name"], raw["path"], fmt, {str(k): str(v) for k, v in meta.items()}))
    return DatasetIndex(entries, INDEX_VERSION)


def _load_artifact(path: Path, entry: IndexEntry) -> Circuit:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ArtifactParseError(f"{path}: {exc}") from exc
    if entry.format == "gates-v1":
        c = parse_gates_text(text, entry.name)
    else:
        try:
            c = Circuit.from_dict(json.loads(text))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ArtifactParseError(f"{path}: {exc}") from exc
    if c.name != entry.name:
        raise ArtifactParseError(f"{path}: artifact name {c.name!r} != index name {entry.name!r}")
    return c.replace(metadata=entry.metadata)


def load_dataset(directory: str | Path) -> list[Circuit]:
    index = read_index(directory)
    return [_load_artifact(Path(directory) / e.path, e) for e in index.entries]


def write_gates_artifact(c: Circuit, path: str | Path) -> None:
    Path(path).write_text(format_gates_text(c))


def example_dataset() -> list[Circuit]:
    bell = make_circuit(
        "bell", 2, 2,
        [("h", 0), ("cx", (0, 1)), ("measure", 0, 0), ("measure", 1, 1)],
    )
    ghz = make_circuit(
        "ghz3", 3, 3,
        [("h", 0), ("cx", (0, 1)), ("cx", (1, 2))] + [("measure", q, q) for q in range(3)],
    )
    ops: list[tuple] = []
    n = 4
    for j in range(n):
        ops.append(("h", j))
        for k in range(j + 1, n):
            # controlled phase pi/2^(k-j) between k (control) and j (target), as rz/cx
            theta = math.pi / 2 ** (k - j)
            ops += [
                ("rz", k, (theta / 2,)),
                ("cx", (k, j)),
                ("rz", j, (-theta / 2,)),
                ("cx", (k, j)),
                ("rz", j, (theta / 2,)),
            ]
    ops += [("swap", (0, 3)), ("swap", (1, 2))]
    ops += [("measure", q, q) for q in range(n)]
    qft = make_circuit("qft4", n, n, ops)
    return [bell, ghz, qft]
