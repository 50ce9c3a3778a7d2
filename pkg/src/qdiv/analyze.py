"""Resource measurement: T-count, ASAP layering, T-depth, per-qubit T-layer counts."""
from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field

from .gateir import T_KINDS, Circuit, GateKind, lower_to_clifford_t

TOFFOLI_T_COUNT = 7


@dataclass
class Schedule:
    """``layers[k]`` holds the gate indices placed in layer k+1."""

    layers: list[list[int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.layers)


@dataclass
class ResourceReport:
    t_count: int
    t_depth: int
    total_depth: int
    qubit_count: int
    histogram: dict[str, int]
    per_qubit_t_layers: dict[int, int]
    per_register_t_layers: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "t_count": self.t_count,
            "t_depth": self.t_depth,
            "total_depth": self.total_depth,
            "qubit_count": self.qubit_count,
            "histogram": dict(self.histogram),
            "per_qubit_t_layers": {str(q): v for q, v in self.per_qubit_t_layers.items()},
            "per_register_t_layers": dict(self.per_register_t_layers),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


ROW_COLUMNS = ("n", "kind", "t_count", "t_depth", "total_depth", "qubits")


def report_row(report: ResourceReport, n: int | None, kind: str) -> dict:
    return {
        "n": "" if n is None else n,
        "kind": kind,
        "t_count": report.t_count,
        "t_depth": report.t_depth,
        "total_depth": report.total_depth,
        "qubits": report.qubit_count,
    }


def rows_to_csv(rows: list[dict], columns=ROW_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def rows_to_markdown(rows: list[dict], columns=ROW_COLUMNS) -> str:
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    for row in rows:
        lines.append("| " + " | ".join(str(row[c]) for c in columns) + " |")
    return "\n".join(lines) + "\n"


def t_count(circuit: Circuit) -> int:
    """T plus Tdg gates; an unlowered Toffoli counts as its 7-T lowering."""
    total = 0
    for g in circuit.gates:
        if g.kind in T_KINDS:
            total += 1
        elif g.kind is GateKind.TOFFOLI:
            total += TOFFOLI_T_COUNT
    return total


def _layer_numbers(circuit: Circuit) -> list[int]:
    front = [0] * circuit.qubit_count
    layers = []
    for g in circuit.gates:
        ops = g.operands
        layer = 1 + max(front[q] for q in ops)
        for q in ops:
            front[q] = layer
        layers.append(layer)
    return layers


def schedule_asap(circuit: Circuit) -> Schedule:
    """Greedy layering: each gate goes one layer past the latest earlier gate on any of its qubits."""
    sched = Schedule()
    for idx, layer in enumerate(_layer_numbers(circuit)):
        while len(sched.layers) < layer:
            sched.layers.append([])
        sched.layers[layer - 1].append(idx)
    return sched


def _t_layers(circuit: Circuit, layer_of: list[int]) -> set[int]:
    return {layer for g, layer in zip(circuit.gates, layer_of) if g.kind in T_KINDS}


def _lowered(circuit: Circuit) -> Circuit:
    if any(g.kind is GateKind.TOFFOLI for g in circuit.gates):
        return lower_to_clifford_t(circuit)
    return circuit


def t_depth(circuit: Circuit) -> int:
    """Number of ASAP layers (of the lowered circuit) holding at least one T/Tdg."""
    c = _lowered(circuit)
    return len(_t_layers(c, _layer_numbers(c)))


def per_qubit_t_layers(circuit: Circuit) -> dict[int, int]:
    """For each qubit: how many T-bearing layers contain a gate touching it."""
    c = _lowered(circuit)
    layer_of = _layer_numbers(c)
    t_layers = _t_layers(c, layer_of)
    seen: list[set[int]] = [set() for _ in range(c.qubit_count)]
    for g, layer in zip(c.gates, layer_of):
        if layer in t_layers:
            for q in g.operands:
                seen[q].add(layer)
    return {q: len(s) for q, s in enumerate(seen)}


def per_register_t_layers(circuit: Circuit, per_qubit: dict[int, int] | None = None) -> dict[str, int]:
    """Register name -> the largest per-qubit T-layer count among its qubits."""
    if per_qubit is None:
        per_qubit = per_qubit_t_layers(circuit)
    return {
        name: max((per_qubit[q] for q in qubits), default=0)
        for name, qubits in circuit.registers.items()
    }


def resource_report(circuit: Circuit) -> ResourceReport:
    c = _lowered(circuit)
    layer_of = _layer_numbers(c)
    t_layers = _t_layers(c, layer_of)
    seen: list[set[int]] = [set() for _ in range(c.qubit_count)]
    for g, layer in zip(c.gates, layer_of):
        if layer in t_layers:
            for q in g.operands:
                seen[q].add(layer)
    per_qubit = {q: len(s) for q, s in enumerate(seen)}
    hist = Counter(g.kind.value for g in c.gates)
    return ResourceReport(
        t_count=t_count(c),
        t_depth=len(t_layers),
        total_depth=max(layer_of, default=0),
        qubit_count=c.qubit_count,
        histogram={k.value: hist.get(k.value, 0) for k in GateKind},
        per_qubit_t_layers=per_qubit,
        per_register_t_layers=per_register_t_layers(c, per_qubit),
    )
