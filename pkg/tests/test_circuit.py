import copy
import json
import math

import pytest
from hypothesis import given

from helpers import circuits
from qstrat.circuit import (
    Circuit,
    Gate,
    canonical_json,
    concat,
    depth,
    fingerprint,
    format_gates_text,
    make_circuit,
    parse_gates_text,
    size,
    two_qubit_count,
)
from qstrat.errors import ArtifactParseError, ValidationError


def bell(measure: bool = False) -> Circuit:
    ops = [("h", 0), ("cx", (0, 1))]
    if measure:
        ops += [("measure", 0, 0), ("measure", 1, 1)]
    return make_circuit("bell", 2, 2 if measure else 0, ops)


def test_depth_examples():
    assert depth(Circuit("e", 1)) == 0
    assert depth(bell()) == 2
    assert depth(make_circuit("xx", 2, 0, [("x", 0), ("x", 1)])) == 1


def test_barrier_aligns_fronts_without_depth():
    c = make_circuit("b", 2, 0, [("x", 0), ("x", 0), ("barrier", (0, 1)), ("x", 1)])
    assert depth(c) == 3
    assert size(c) == 3


def test_measure_shares_clbit_wire():
    c = make_circuit("m", 2, 1, [("measure", 0, 0), ("measure", 1, 0)])
    assert depth(c) == 2


def test_two_qubit_count_examples():
    assert two_qubit_count(bell()) == 1
    assert two_qubit_count(Circuit("e", 1)) == 0
    assert two_qubit_count(make_circuit("s", 3, 0, [("swap", (0, 1)), ("cx", (1, 2))])) == 2


def test_size_examples():
    assert size(bell(measure=True)) == 4
    assert size(Circuit("e", 1)) == 0
    assert size(make_circuit("b", 2, 0, [("barrier", (0, 1))])) == 0


def test_fingerprint_examples():
    c = bell(measure=True)
    ghz = make_circuit("ghz3", 3, 3, [("h", 0), ("cx", (0, 1)), ("cx", (1, 2))] + [("measure", q, q) for q in range(3)])
    assert fingerprint(c) == fingerprint(copy.deepcopy(c))
    assert fingerprint(c) != fingerprint(ghz)
    fp = fingerprint(c)
    assert len(fp) == 64 and int(fp, 16) >= 0


def test_fingerprint_ignores_metadata_but_not_name():
    c = bell()
    assert fingerprint(c) == fingerprint(c.replace(metadata={"k": "v"}))
    assert fingerprint(c) != fingerprint(c.replace(name="other"))


def test_canonical_json_is_sorted_and_compact():
    assert canonical_json({"b": 1, "a": [0.5, 2]}) == '{"a":[0.5,2],"b":1}'
    # floats use a fixed 17-significant-digit form
    assert canonical_json(0.1) == "0.10000000000000001"


@pytest.mark.parametrize(
    "bad",
    [
        lambda: Gate("u3", (0,)),
        lambda: Gate("cx", (0,)),
        lambda: Gate("cx", (1, 1)),
        lambda: Gate("rz", (0,)),
        lambda: Gate("rz", (0,), (math.nan,)),
        lambda: Gate("measure", (0,)),
        lambda: Gate("x", (0,), clbit=0),
        lambda: Gate("x", (-1,)),
        lambda: Circuit("", 1),
        lambda: Circuit("c", 0),
        lambda: Circuit("c", 1, 0, (Gate("x", (1,)),)),
        lambda: Circuit("c", 1, 1, (Gate("measure", (0,), clbit=1),)),
    ],
)
def test_invalid_construction_rejected(bad):
    with pytest.raises(ValidationError):
        bad()


def test_gates_text_parse():
    text = "# bell\nqubits 2\nclbits 2\nh 0\ncx 0 1\nrz(0.5) 1\nbarrier 0 1\nmeasure 0 -> 0\nmeasure 1 -> 1\n"
    c = parse_gates_text(text, "bell")
    assert c.num_qubits == 2 and c.num_clbits == 2
    assert [g.name for g in c.gates] == ["h", "cx", "rz", "barrier", "measure", "measure"]
    assert c.gates[2].params == (0.5,)
    assert c.gates[5].clbit == 1


@pytest.mark.parametrize(
    "text",
    ["h 0\n", "qubits 2\nfoo 0\n", "qubits 1\nrz(abc) 0\n", "qubits 1\nclbits 1\nmeasure 0 0\n", "qubits x\n"],
)
def test_gates_text_errors(text):
    with pytest.raises(ArtifactParseError):
        parse_gates_text(text, "bad")


@given(circuits(max_qubits=4))
def test_gates_text_round_trip(c):
    assert parse_gates_text(format_gates_text(c), c.name) == c


@given(circuits(max_qubits=4))
def test_json_round_trip(c):
    again = Circuit.from_dict(json.loads(json.dumps(c.to_dict())))
    assert again == c
    assert fingerprint(again) == fingerprint(c)


@given(circuits(max_qubits=3, measured=False), circuits(max_qubits=3, measured=False))
def test_depth_of_concat_is_subadditive(a, b):
    n = max(a.num_qubits, b.num_qubits)
    a, b = a.replace(num_qubits=n), b.replace(num_qubits=n)
    ab = concat(a, b)
    assert max(depth(a), depth(b)) <= depth(ab) <= depth(a) + depth(b)
    assert size(ab) == size(a) + size(b)


@given(circuits(max_qubits=4))
def test_metric_bounds(c):
    assert two_qubit_count(c) <= size(c)
    assert depth(c) <= size(c)
