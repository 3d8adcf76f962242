"""Gate-list circuit representation, structural metrics and fingerprints."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .errors import ArtifactParseError, ValidationError

ONE_QUBIT_GATES = frozenset({"h", "x", "y", "z", "s", "sdg", "t", "sx", "rx", "ry", "rz"})
TWO_QUBIT_GATES = frozenset({"cx", "cz", "swap"})
PARAM_GATES = frozenset({"rx", "ry", "rz"})
SUPPORTED_GATES = ONE_QUBIT_GATES | TWO_QUBIT_GATES | {"barrier", "measure"}


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    clbit: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        name = self.name
        if name not in SUPPORTED_GATES:
            raise ValidationError(f"unsupported gate {name!r}")
        n = len(self.qubits)
        if name in ONE_QUBIT_GATES or name == "measure":
            if n != 1:
                raise ValidationError(f"{name} takes exactly one qubit, got {n}")
        elif name in TWO_QUBIT_GATES:
            if n != 2:
                raise ValidationError(f"{name} takes exactly two qubits, got {n}")
        elif n < 1:
            raise ValidationError("barrier needs at least one qubit")
        if len(set(self.qubits)) != n:
            raise ValidationError(f"{name} has repeated qubit operands {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValidationError("negative qubit index")
        want = 1 if name in PARAM_GATES else 0
        if len(self.params) != want:
            raise ValidationError(f"{name} takes {want} params, got {len(self.params)}")
        if not all(math.isfinite(p) for p in self.params):
            raise ValidationError(f"{name} has non-finite params")
        if name == "measure":
            if self.clbit is None or self.clbit < 0:
                raise ValidationError("measure needs a non-negative clbit")
        elif self.clbit is not None:
            raise ValidationError(f"{name} cannot carry a clbit")

    @property
    def is_two_qubit(self) -> bool:
        return self.name in TWO_QUBIT_GATES

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"name": self.name, "qubits": list(self.qubits), "params": list(self.params)}
        if self.clbit is not None:
            d["clbit"] = self.clbit
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> Gate:
        return cls(d["name"], tuple(d["qubits"]), tuple(d.get("params", ())), d.get("clbit"))


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list over ``num_qubits`` qubits and ``num_clbits`` classical bits.

    Instances are immutable; the transformation passes build new circuits.
    """

    name: str
    num_qubits: int
    num_clbits: int = 0
    gates: tuple[Gate, ...] = ()
    metadata: Mapping[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "metadata", dict(self.metadata))
        if not self.name:
            raise ValidationError("circuit name must be non-empty")
        if self.num_qubits < 1:
            raise ValidationError("num_qubits must be positive")
        if self.num_clbits < 0:
            raise ValidationError("num_clbits must be non-negative")
        for g in self.gates:
            if max(g.qubits) >= self.num_qubits:
                raise ValidationError(f"{g.name} on {g.qubits} exceeds {self.num_qubits} qubits")
            if g.clbit is not None and g.clbit >= self.num_clbits:
                raise ValidationError(f"clbit {g.clbit} exceeds {self.num_clbits} clbits")

    def replace(self, **changes: Any) -> Circuit:
        kwargs = dict(
            name=self.name,
            num_qubits=self.num_qubits,
            num_clbits=self.num_clbits,
            gates=self.gates,
            metadata=self.metadata,
        )
        kwargs.update(changes)
        return Circuit(**kwargs)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "num_qubits": self.num_qubits,
            "num_clbits": self.num_clbits,
            "gates": [g.to_dict() for g in self.gates],
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any], metadata: Mapping[str, str] | None = None) -> Circuit:
        return cls(
            name=d["name"],
            num_qubits=int(d["num_qubits"]),
            num_clbits=int(d.get("num_clbits", 0)),
            gates=tuple(Gate.from_dict(g) for g in d["gates"]),
            metadata=dict(metadata or {}),
        )

    @property
    def measured_clbits(self) -> list[int]:
        return sorted({g.clbit for g in self.gates if g.name == "measure"})


def depth(c: Circuit) -> int:
    """Length of the longest gate chain over shared qubit/clbit wires.

    Barriers align the fronts of their wires but add no depth.
    """
    qfront = [0] * c.num_qubits
    cfront = [0] * c.num_clbits
    for g in c.gates:
        if g.name == "barrier":
            level = max(qfront[q] for q in g.qubits)
            for q in g.qubits:
                qfront[q] = level
            continue
        level = max(qfront[q] for q in g.qubits)
        if g.clbit is not None:
            level = max(level, cfront[g.clbit])
        level += 1
        for q in g.qubits:
            qfront[q] = level
        if g.clbit is not None:
            cfront[g.clbit] = level
    return max(qfront + cfront, default=0)


def two_qubit_count(c: Circuit) -> int:
    return sum(1 for g in c.gates if g.is_two_qubit)


def size(c: Circuit) -> int:
    return sum(1 for g in c.gates if g.name != "barrier")


def _canonical(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=True)
    if isinstance(value, Mapping):
        items = sorted(value.items())
        return "{" + ",".join(json.dumps(str(k)) + ":" + _canonical(v) for k, v in items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_canonical(v) for v in value) + "]"
    raise TypeError(f"cannot canonicalize {type(value).__name__}")


def canonical_json(value: Any) -> str:
    """Sorted-key JSON without whitespace; floats carry 17 significant digits."""
    return _canonical(value)


def fingerprint(c: Circuit) -> str:
    return hashlib.sha256(canonical_json(c.to_dict()).encode("utf-8")).hexdigest()


# -- gates-v1 text format ------------------------------------------------------
#
#   qubits 2
#   clbits 2
#   h 0
#   rz(1.5707963267948966) 1
#   cx 0 1
#   measure 0 -> 0


def parse_gates_text(text: str, name: str) -> Circuit:
    num_qubits: int | None = None
    num_clbits = 0
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head, _, rest = line.partition(" ")
            if head == "qubits":
                num_qubits = int(rest)
                continue
            if head == "clbits":
                num_clbits = int(rest)
                continue
            params: tuple[float, ...] = ()
            if "(" in head:
                if not head.endswith(")"):
                    raise ValueError("unbalanced parameter list")
                head, _, plist = head[:-1].partition("(")
                params = tuple(float(p) for p in plist.split(",") if p.strip())
            clbit = None
            if head == "measure":
                qpart, arrow, cpart = rest.partition("->")
                if not arrow:
                    raise ValueError("measure needs '-> clbit'")
                rest, clbit = qpart, int(cpart)
            qubits = tuple(int(tok) for tok in rest.split())
            gates.append(Gate(head, qubits, params, clbit))
        except (ValueError, ValidationError) as exc:
            raise ArtifactParseError(f"line {lineno}: {exc}") from exc
    if num_qubits is None:
        raise ArtifactParseError("missing 'qubits N' header")
    try:
        return Circuit(name, num_qubits, num_clbits, tuple(gates))
    except ValidationError as exc:
        raise ArtifactParseError(str(exc)) from exc


def format_gates_text(c: Circuit) -> str:
    lines = [f"qubits {c.num_qubits}", f"clbits {c.num_clbits}"]
    for g in c.gates:
        head = g.name
        if g.params:
            head += "(" + ",".join(repr(p) for p in g.params) + ")"
        ops = " ".join(str(q) for q in g.qubits)
        if g.name == "measure":
            ops += f" -> {g.clbit}"
        lines.append(f"{head} {ops}")
    return "\n".join(lines) + "\n"


def concat(a: Circuit, b: Circuit, name: str | None = None) -> Circuit:
    if a.num_qubits != b.num_qubits:
        raise ValidationError("concat requires equal widths")
    return Circuit(name or a.name, a.num_qubits, max(a.num_clbits, b.num_clbits), a.gates + b.gates)


def make_circuit(name: str, num_qubits: int, num_clbits: int, ops: Iterable[Sequence[Any]]) -> Circuit:
    """Build a circuit from compact tuples ``(name, qubits[, params][, clbit])``."""
    gates = []
    for op in ops:
        gname, qubits = op[0], op[1]
        if isinstance(qubits, int):
            qubits = (qubits,)
        params: Sequence[float] = ()
        clbit = None
        for extra in op[2:]:
            if isinstance(extra, (tuple, list)):
                params = extra
            else:
                clbit = extra
        gates.append(Gate(gname, tuple(qubits), tuple(params), clbit))
    return Circuit(name, num_qubits, num_clbits, tuple(gates))
