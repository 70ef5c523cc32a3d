"""JSON wire format for recorded programs.

The document carries ``version`` (currently 1), the qubit/future/dump counts,
and a flat instruction array of tagged objects::

    {"op": "alloc", "count": n}
    {"op": "gate", "kind": "h", "angle": 1.5707, "target": 0, "controls": [1]}
    {"op": "measure", "qubits": [0, 1], "future": 0}
    {"op": "dump", "qubits": [0], "dump": 0}
    {"op": "branch", "future": 0, "equals": 1, "body": [...]}

``angle`` is present only for rx/ry/rz/phase and is given in radians.  This
format is the contract between the command line, the builder, and the engine.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import MalformedCode
from .ir import (
    Alloc,
    Branch,
    Condition,
    Dump,
    Gate,
    GateApp,
    GateKind,
    Instruction,
    Measure,
    PARAMETRIC_KINDS,
    QuantumCode,
)

FORMAT_VERSION = 1


def _encode_instruction(ins: Instruction) -> dict[str, Any]:
    if isinstance(ins, Alloc):
        return {"op": "alloc", "count": ins.count}
    if isinstance(ins, GateApp):
        out: dict[str, Any] = {"op": "gate", "kind": ins.gate.kind.value}
        if ins.gate.angle is not None:
            out["angle"] = ins.gate.angle
        out["target"] = ins.target
        out["controls"] = list(ins.controls)
        return out
    if isinstance(ins, Measure):
        return {"op": "measure", "qubits": list(ins.qubits), "future": ins.future}
    if isinstance(ins, Dump):
        return {"op": "dump", "qubits": list(ins.qubits), "dump": ins.dump}
    if isinstance(ins, Branch):
        return {
            "op": "branch",
            "future": ins.condition.future,
            "equals": ins.condition.equals,
            "body": [_encode_instruction(i) for i in ins.body],
        }
    raise MalformedCode(f"unknown instruction {ins!r}")


def serialize(code: QuantumCode) -> bytes:
    """Encode a validated program as UTF-8 JSON."""
    code.validate()
    doc = {
        "version": FORMAT_VERSION,
        "num_qubits": code.num_qubits,
        "num_futures": code.num_futures,
        "num_dumps": code.num_dumps,
        "instructions": [_encode_instruction(i) for i in code.instructions],
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def _need(obj: dict, key: str, kinds) -> Any:
    if key not in obj:
        raise MalformedCode(f"missing field {key!r}")
    value = obj[key]
    if not isinstance(value, kinds) or isinstance(value, bool):
        raise MalformedCode(f"field {key!r} has wrong type: {value!r}")
    return value


def _int_list(obj: dict, key: str) -> list[int]:
    value = _need(obj, key, list)
    for item in value:
        if not isinstance(item, int) or isinstance(item, bool):
            raise MalformedCode(f"field {key!r} must hold integers")
    return value


def _decode_instruction(obj: Any) -> Instruction:
    if not isinstance(obj, dict):
        raise MalformedCode(f"instruction must be an object, got {obj!r}")
    op = _need(obj, "op", str)
    if op == "alloc":
        return Alloc(_need(obj, "count", int))
    if op == "gate":
        kind_name = _need(obj, "kind", str)
        try:
            kind = GateKind(kind_name)
        except ValueError:
            raise MalformedCode(f"unknown gate kind {kind_name!r}") from None
        angle = None
        if kind in PARAMETRIC_KINDS:
            angle = float(_need(obj, "angle", (int, float)))
        elif "angle" in obj:
            raise MalformedCode(f"gate {kind_name!r} takes no angle")
        try:
            gate = Gate(kind, angle)
        except ValueError as exc:
            raise MalformedCode(str(exc)) from None
        return GateApp(gate, _need(obj, "target", int), tuple(_int_list(obj, "controls")))
    if op == "measure":
        return Measure(tuple(_int_list(obj, "qubits")), _need(obj, "future", int))
    if op == "dump":
        return Dump(tuple(_int_list(obj, "qubits")), _need(obj, "dump", int))
    if op == "branch":
        body = _need(obj, "body", list)
        return Branch(
            Condition(_need(obj, "future", int), _need(obj, "equals", int)),
            tuple(_decode_instruction(i) for i in body),
        )
    raise MalformedCode(f"unknown op {op!r}")


def deserialize(data: bytes | str) -> QuantumCode:
    """Parse and validate a program document; raises MalformedCode on any defect."""
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedCode(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedCode("top level must be an object")
    if _need(doc, "version", int) != FORMAT_VERSION:
        raise MalformedCode(f"unsupported version {doc['version']!r}")
    instructions = _need(doc, "instructions", list)
    code = QuantumCode(
        num_qubits=_need(doc, "num_qubits", int),
        instructions=tuple(_decode_instruction(i) for i in instructions),
        num_futures=_need(doc, "num_futures", int),
        num_dumps=_need(doc, "num_dumps", int),
    )
    code.validate()
    return code
