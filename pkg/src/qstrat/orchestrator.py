"""Dataset-level strategy adjustment: evaluate every candidate per circuit and select one."""

from __future__ import annotations

import hashlib
import json
import logging
import math
import shutil
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

from . import __version__
from .backend import BackendModel, resolve_backend
from .bandit import LinearPosterior, featurize, prior, propose_order, update
from .cache import CompileCache, cache_key
from .circuit import Circuit, fingerprint
from .compiler.pipeline import CompiledCandidate, compile_circuit, fixed_clock
from .compiler.twirl import measurement_twirl_variants
from .dataset import INDEX_NAME, load_dataset, prepare_output_dir, read_index, safe_component, save_dataset
from .diagnostics import distances
from .errors import ContractError
from .executor import Counts, entropy, measured_physical_qubits, run, top_probability, untwirl
from .metrics import MetricRecord, comparison_ratios, finite_safe_score, jsonable, resolve_weights
from .mitigation import readout_mitigate, split_shots, zne_counts
from .pareto import pareto_front, select
from .strategy import StrategySpec, baseline_strategy, default_candidates

log = logging.getLogger(__name__)

WORKLOAD_FORMAT = "qstrat-workload-v1"
STRUCTURAL_DIAGNOSTICS = ("depth", "2q", "err")
EXECUTION_DIAGNOSTICS = ("entropy", "p_max")

CompileFn = Callable[..., CompiledCandidate]


def derive_seed(*parts: Any) -> int:
    digest = hashlib.sha256("\x1f".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "little")


@dataclass
class AdjustOptions:
    search: str = "grid"
    pareto: bool = False
    max_candidates: int = 24
    weights: Mapping[str, float] | None = None
    execute: bool = False
    shots: int = 1024
    seed: int = 0
    noisy: bool = True
    alpha: float = 1.0
    sigma: float = 1.0
    # seconds charged per compile; None measures wall-clock time
    fixed_compile_time: float | None = None

    def __post_init__(self) -> None:
        if self.search not in ("grid", "bandit"):
            raise ContractError(f"search must be 'grid' or 'bandit', got {self.search!r}")
        if self.max_candidates < 1:
            raise ContractError("max_candidates must be >= 1")
        if self.execute and self.shots < 1:
            raise ContractError("shots must be positive")
        self.weights = resolve_weights(self.weights)

    def metadata(self) -> dict[str, Any]:
        return {
            "search": self.search,
            "pareto": self.pareto,
            "max_candidates": self.max_candidates,
            "weights": dict(sorted(self.weights.items())),
            "execute": self.execute,
            "shots": self.shots if self.execute else None,
            "seed": self.seed,
            "noisy": self.noisy,
            "alpha": self.alpha,
            "sigma": self.sigma,
            "fixed_compile_time": self.fixed_compile_time,
        }


@dataclass
class CandidateResult:
    strategy: StrategySpec
    metrics: MetricRecord
    notes: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)
    compiled: CompiledCandidate | None = None
    cache_hit: bool = False


@dataclass
class SelectionRecord:
    circuit: str
    fingerprint: str
    selected_index: int
    selected: StrategySpec
    selected_metrics: MetricRecord
    baseline_metrics: MetricRecord
    ratios: dict[str, float | None]
    evaluated: int
    order: list[int]
    scores: list[float]
    pareto_front: list[int]
    results: list[CandidateResult]
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        front = set(self.pareto_front)
        return {
            "circuit": self.circuit,
            "fingerprint": self.fingerprint,
            "selected_index": self.selected_index,
            "selected_label": self.selected.label,
            "selected_strategy": self.selected.to_dict(),
            "selected_metrics": self.selected_metrics.to_json(),
            "baseline_metrics": self.baseline_metrics.to_json(),
            "ratios": jsonable(self.ratios),
            "evaluated_candidates": self.evaluated,
            "evaluation_order": list(self.order),
            "pareto_front": list(self.pareto_front),
            "warnings": list(self.warnings),
            "candidates": [
                {
                    "index": i,
                    "label": r.strategy.label,
                    "group": r.strategy.group,
                    "digest": r.strategy.digest(),
                    "score": jsonable(self.scores[i]),
                    "pareto": i in front,
                    "failed": r.metrics.failed,
                    "notes": list(r.notes),
                    "metrics": r.metrics.to_json()["values"],
                }
                for i, r in enumerate(self.results)
            ],
        }


@dataclass
class BalancedWorkload:
    metadata: dict[str, Any]
    baseline: StrategySpec
    candidates: list[StrategySpec]
    selections: list[SelectionRecord]
    diagnostics: dict[str, Any]
    circuits: list[Circuit]

    def index_document(self) -> dict[str, Any]:
        return {
            "format": WORKLOAD_FORMAT,
            "metadata": self.metadata,
            "baseline_strategy": self.baseline.to_dict(),
            "candidates": [
                {"index": i, "label": s.label, "group": s.group, "digest": s.digest(), "strategy": s.to_dict()}
                for i, s in enumerate(self.candidates)
            ],
            "selections": [r.to_dict() for r in self.selections],
        }

    def diagnostics_document(self) -> dict[str, Any]:
        return {"format": WORKLOAD_FORMAT, "diagnostics": jsonable(self.diagnostics)}


def compute_diagnostics(selections: Sequence[SelectionRecord], keys: Sequence[str]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key in keys:
        pairs = [
            (r.baseline_metrics.finite(key), r.selected_metrics.finite(key))
            for r in selections
        ]
        xs = [x for x, _ in pairs if x is not None]
        ys = [y for _, y in pairs if y is not None]
        entry: dict[str, Any] = {"n_baseline": len(xs), "n_selected": len(ys), "notes": []}
        if xs and ys:
            entry.update(distances(xs, ys))
            if min(len(xs), len(ys)) == 1:
                entry["notes"].append("small-sample")
        else:
            entry["notes"].append("no finite values")
        out[key] = entry
    return out


class Adjuster:
    """Owns the backend, compile cache, surrogate posterior and evaluation counters for one run."""

    def __init__(
        self,
        backend: BackendModel,
        options: AdjustOptions | None = None,
        cache: CompileCache | None = None,
        compile_fn: CompileFn = compile_circuit,
    ) -> None:
        self.backend = backend
        self.options = options or AdjustOptions()
        self.cache = cache if cache is not None else CompileCache()
        self.compile_fn = compile_fn
        self.posterior: LinearPosterior = prior(self.options.alpha, self.options.sigma)
        self.evaluations = 0
        self.compilations = 0

    def _clock(self) -> Callable[[], float]:
        t = self.options.fixed_compile_time
        return time.perf_counter if t is None else fixed_clock(t)

    def compile(self, c: Circuit, s: StrategySpec) -> tuple[CompiledCandidate, bool]:
        key = cache_key(self.backend, c, s)
        hit = self.cache.get(key)
        if hit is not None:
            return hit, True
        self.compilations += 1
        cand = self.compile_fn(c, self.backend, s, clock=self._clock())
        self.cache.put(key, cand)
        return cand, False

    def _execute(self, cand: CompiledCandidate, s: StrategySpec, seed: int) -> Counts:
        opts = self.options
        circ = cand.circuit
        if not s.measurement_twirling:
            return run(circ, self.backend, opts.shots, seed, opts.noisy)
        variants = measurement_twirl_variants(circ, s.num_twirls, s.suppression_seed)
        total: Counts | None = None
        for i, ((variant, mask), n) in enumerate(zip(variants, split_shots(opts.shots, len(variants)))):
            if n < 1:
                continue
            k = untwirl(run(variant, self.backend, n, seed + i, opts.noisy), mask)
            total = k if total is None else total + k
        assert total is not None
        return total

    def evaluate_candidate(self, c: Circuit, s: StrategySpec, seed: int = 0, count: bool = True) -> CandidateResult:
        """Compile (through the cache), optionally execute and mitigate; never raises."""
        if count:
            self.evaluations += 1
        try:
            cand, hit = self.compile(c, s)
        except Exception as exc:  # noqa: BLE001 - every failure becomes a record
            log.info("compile failed for %s / %s: %s", c.name, s.label, exc)
            notes = ["cutting_unsupported"] if s.cutting else []
            return CandidateResult(s, MetricRecord({}, failed=True), notes + [f"compile_error: {exc}"])
        values = dict(cand.metrics.values)
        notes = list(cand.notes)
        result = CandidateResult(s, MetricRecord(values), notes, {}, cand, hit)
        if not self.options.execute:
            return result
        try:
            counts = self._execute(cand, s, seed)
        except Exception as exc:  # noqa: BLE001
            notes.append(f"execute_error: {exc}")
            result.metrics = MetricRecord(values, failed=True)
            return result
        values.update(entropy=entropy(counts), p_max=top_probability(counts), shots=counts.shots)
        result.details["counts"] = dict(counts.counts)
        if s.readout_mitigation:
            try:
                mit = readout_mitigate(counts, self.backend, measured_physical_qubits(cand.circuit))
                values.update(mit_p_max=mit.top_probability(), mit_entropy=mit.entropy())
                result.details["readout_mitigated"] = mit.probs
            except Exception as exc:  # noqa: BLE001
                notes.append(f"mitigation_error: {exc}")
        if s.zne:
            try:
                z = zne_counts(cand.circuit, self.backend, s, self.options.shots, seed + 7919, self.options.noisy)
                values.update(zne_parity=z.extrapolated, zne_p_max=z.distribution.top_probability(),
                              zne_entropy=z.distribution.entropy())
                result.details["zne"] = z.summary()
                result.details["zne_distribution"] = z.distribution.probs
            except Exception as exc:  # noqa: BLE001
                notes.append(f"zne_error: {exc}")
        result.metrics = MetricRecord(values)
        return result

    def adjust_circuit(
        self, idx: int, c: Circuit, candidates: Sequence[StrategySpec], baseline: CandidateResult
    ) -> SelectionRecord:
        opts = self.options
        fp = fingerprint(c)
        if opts.search == "bandit":
            order = propose_order(self.posterior, candidates, derive_seed(opts.seed, "order", idx))
        else:
            order = list(range(len(candidates)))
        results: list[CandidateResult | None] = [None] * len(candidates)
        scores = [math.inf] * len(candidates)
        for j in order:
            s = candidates[j]
            r = self.evaluate_candidate(c, s, derive_seed(opts.seed, fp, s.digest()))
            results[j] = r
            scores[j] = finite_safe_score(r.metrics, opts.weights)
            if opts.search == "bandit" and math.isfinite(scores[j]):
                self.posterior = update(self.posterior, featurize(s), scores[j])
        done: list[CandidateResult] = [r for r in results if r is not None]
        assert len(done) == len(candidates)
        tuples = [r.metrics.pareto_tuple() for r in done]
        finite_idx = [i for i, t in enumerate(tuples) if t is not None]
        front = [finite_idx[k] for k in pareto_front([tuples[i] for i in finite_idx])] if finite_idx else []
        chosen = select([(t, r.metrics) for t, r in zip(tuples, done)], opts.weights, opts.pareto)
        warnings = []
        if all(math.isinf(x) for x in scores):
            warnings.append("all candidates invalid; lowest index selected")
        sel = done[chosen]
        return SelectionRecord(
            circuit=c.name,
            fingerprint=fp,
            selected_index=chosen,
            selected=sel.strategy,
            selected_metrics=sel.metrics,
            baseline_metrics=baseline.metrics,
            ratios=comparison_ratios(baseline.metrics, sel.metrics),
            evaluated=len(order),
            order=order,
            scores=scores,
            pareto_front=front,
            results=done,
            warnings=warnings,
        )

    def run(
        self, circuits: Sequence[Circuit], backend_spec: str = "", timestamp: str | None = None
    ) -> BalancedWorkload:
        opts = self.options
        names = [c.name for c in circuits]
        if len(set(names)) != len(names):
            raise ContractError("circuit names must be unique")
        candidates = default_candidates(opts.max_candidates, seed=opts.seed)
        base = baseline_strategy(opts.seed)
        baselines = [
            self.evaluate_candidate(c, base, derive_seed(opts.seed, fingerprint(c), "baseline"), count=False)
            for c in circuits
        ]
        selections = [self.adjust_circuit(i, c, candidates, baselines[i]) for i, c in enumerate(circuits)]
        keys = STRUCTURAL_DIAGNOSTICS + (EXECUTION_DIAGNOSTICS if opts.execute else ())
        metadata = {
            "tool_version": __version__,
            "backend_spec": backend_spec,
            "backend_name": self.backend.name,
            "calibration_id": self.backend.calibration_id,
            "num_circuits": len(circuits),
            "num_candidates": len(candidates),
            "total_evaluations": sum(r.evaluated for r in selections),
            **opts.metadata(),
            "posterior": self.posterior.to_dict() if opts.search == "bandit" else None,
            "timestamp": timestamp or datetime.now(timezone.utc).isoformat(),
        }
        return BalancedWorkload(metadata, base, candidates, selections, compute_diagnostics(selections, keys),
                                list(circuits))


def _dump(path: Path, doc: Any) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n")


def write_workload(w: BalancedWorkload, out: str | Path, overwrite: bool = False,
                   dataset_dir: str | Path | None = None) -> Path:
    """Persist a workload directory: index, diagnostics, circuit copies, per-candidate files."""
    out = Path(out)
    prepare_output_dir(out, overwrite)
    for sub in ("circuits", "candidates"):
        if (out / sub).is_dir():
            shutil.rmtree(out / sub)
    if dataset_dir is not None:
        (out / "circuits").mkdir()
        index = read_index(dataset_dir)
        shutil.copyfile(Path(dataset_dir) / INDEX_NAME, out / "circuits" / INDEX_NAME)
        for e in index.entries:
            shutil.copyfile(Path(dataset_dir) / e.path, out / "circuits" / e.path)
    else:
        save_dataset(w.circuits, out / "circuits")
    for i, rec in enumerate(w.selections):
        cdir = out / "candidates" / f"{i:03d}_{safe_component(rec.circuit)}"
        cdir.mkdir(parents=True)
        for j, r in enumerate(rec.results):
            doc = {
                "circuit": rec.circuit,
                "index": j,
                "strategy": r.strategy.to_dict(),
                "label": r.strategy.label,
                "metrics": r.metrics.to_json(),
                "score": jsonable(rec.scores[j]),
                "notes": r.notes,
                "cache_hit": r.cache_hit,
                "details": jsonable(r.details),
                "layout": None if r.compiled is None else {
                    "initial": list(r.compiled.initial_layout),
                    "final": list(r.compiled.final_layout),
                },
            }
            _dump(cdir / f"{r.strategy.digest()}.json", doc)
    _dump(out / "index.json", w.index_document())
    _dump(out / "diagnostics.json", w.diagnostics_document())
    return out


def adjust(
    dataset: str | Path | Sequence[Circuit],
    backend_spec: str,
    out: str | Path | None = None,
    options: AdjustOptions | None = None,
    overwrite: bool = False,
    cache: CompileCache | None = None,
    compile_fn: CompileFn = compile_circuit,
    timestamp: str | None = None,
) -> BalancedWorkload:
    """Run the full adjustment over a dataset directory (or circuit list) and persist it to ``out``."""
    dataset_dir = None
    if isinstance(dataset, (str, Path)):
        dataset_dir = Path(dataset)
        circuits = load_dataset(dataset_dir)
    else:
        circuits = list(dataset)
    backend = resolve_backend(backend_spec)
    if out is not None:
        # fail on an occupied output dir before spending time on compilation
        prepare_output_dir(Path(out), overwrite)
    adjuster = Adjuster(backend, options, cache, compile_fn)
    workload = adjuster.run(circuits, backend_spec, timestamp)
    if out is not None:
        write_workload(workload, out, overwrite=True, dataset_dir=dataset_dir)
    return workload
