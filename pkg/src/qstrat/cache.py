"""Content-addressed cache of compiled candidates."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .backend import BackendModel
from .circuit import Circuit, fingerprint
from .compiler.pipeline import CompiledCandidate
from .strategy import StrategySpec

CACHE_FORMAT = 1


def cache_key(b: BackendModel, c: Circuit, s: StrategySpec) -> str:
    parts = [b.name, b.calibration_id, fingerprint(c), s.canonical(), f"v{CACHE_FORMAT}"]
    return hashlib.sha256("\x1f".join(parts).encode("utf-8")).hexdigest()


class CompileCache:
    """In-memory map from cache key to serialized candidate, optionally mirrored to a directory."""

    def __init__(self, directory: str | Path | None = None) -> None:
        self._mem: dict[str, str] = {}
        self.directory = Path(directory) if directory is not None else None
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _path(self, key: str) -> Path:
        assert self.directory is not None
        return self.directory / f"{key}.json"

    def get(self, key: str) -> CompiledCandidate | None:
        blob = self._mem.get(key)
        if blob is None and self.directory is not None and self._path(key).is_file():
            blob = self._path(key).read_text()
            self._mem[key] = blob
        if blob is None:
            self.misses += 1
            return None
        self.hits += 1
        return CompiledCandidate.from_dict(json.loads(blob))

    def put(self, key: str, cand: CompiledCandidate) -> None:
        blob = json.dumps(cand.to_dict(), sort_keys=True)
        self._mem[key] = blob
        if self.directory is not None:
            self._path(key).write_text(blob)

    def __len__(self) -> int:
        return len(self._mem)
