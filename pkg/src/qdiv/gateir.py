"""Gate-level circuit IR, Toffoli lowering and serialization.

A circuit is a flat, ordered gate list over ``qubit_count`` indexed qubits plus
a table of named registers.  Register index 0 is always the least significant
bit.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence


class CircuitError(ValueError):
    """Raised for malformed gates, circuits or serialized documents."""


class GateKind(str, Enum):
    X = "X"
    CNOT = "CNOT"
    TOFFOLI = "Toffoli"
    H = "H"
    T = "T"
    TDG = "Tdg"
    S = "S"
    SDG = "Sdg"

    @property
    def arity(self) -> int:
        return _ARITY[self]

    @property
    def is_reversible(self) -> bool:
        """True for the classical permutation gates (X, CNOT, Toffoli)."""
        return self in (GateKind.X, GateKind.CNOT, GateKind.TOFFOLI)


_ARITY = {
    GateKind.X: 1,
    GateKind.CNOT: 2,
    GateKind.TOFFOLI: 3,
    GateKind.H: 1,
    GateKind.T: 1,
    GateKind.TDG: 1,
    GateKind.S: 1,
    GateKind.SDG: 1,
}

T_KINDS = frozenset({GateKind.T, GateKind.TDG})


@dataclass(frozen=True)
class Gate:
    """One gate application.  Controls come first, the target is last."""

    kind: GateKind
    operands: tuple[int, ...]

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        ops = tuple(int(q) for q in self.operands)
        object.__setattr__(self, "operands", ops)
        if len(ops) != kind.arity:
            raise CircuitError(
                f"{kind.value} takes {kind.arity} operand(s), got {len(ops)}"
            )
        if any(q < 0 for q in ops):
            raise CircuitError(f"negative qubit index in {ops}")
        if len(set(ops)) != len(ops):
            raise CircuitError(f"duplicate operand in {kind.value}{ops}")

    @property
    def target(self) -> int:
        return self.operands[-1]

    @property
    def controls(self) -> tuple[int, ...]:
        return self.operands[:-1]

    def __str__(self) -> str:
        return f"{self.kind.value}({', '.join(map(str, self.operands))})"


def X(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def CNOT(control: int, target: int) -> Gate:
    return Gate(GateKind.CNOT, (control, target))


def Toffoli(c1: int, c2: int, target: int) -> Gate:
    return Gate(GateKind.TOFFOLI, (c1, c2, target))


def H(q: int) -> Gate:
    return Gate(GateKind.H, (q,))


def T(q: int) -> Gate:
    return Gate(GateKind.T, (q,))


def Tdg(q: int) -> Gate:
    return Gate(GateKind.TDG, (q,))


def S(q: int) -> Gate:
    return Gate(GateKind.S, (q,))


def Sdg(q: int) -> Gate:
    return Gate(GateKind.SDG, (q,))


@dataclass(eq=False)
class Circuit:
    """Ordered gate list over ``qubit_count`` qubits with named registers.

    Builders mutate a circuit through :meth:`append`; once handed out a circuit
    is treated as read-only and every pass returns a fresh one.
    """

    qubit_count: int
    gates: list[Gate] = field(default_factory=list)
    registers: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if isinstance(self.qubit_count, bool) or int(self.qubit_count) < 1:
            raise CircuitError(f"qubit_count must be >= 1, got {self.qubit_count}")
        self.qubit_count = int(self.qubit_count)
        gates, self.gates = list(self.gates), []
        self.extend(gates)
        regs, self.registers = dict(self.registers), {}
        for name, qubits in regs.items():
            self.add_register(name, qubits)

    def append(self, gate: Gate) -> "Circuit":
        for q in gate.operands:
            if q >= self.qubit_count:
                raise CircuitError(
                    f"{gate} addresses qubit {q} of a {self.qubit_count}-qubit circuit"
                )
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def add_register(self, name: str, qubits: Sequence[int]) -> "Circuit":
        qubits = tuple(int(q) for q in qubits)
        if name in self.registers:
            raise CircuitError(f"register {name!r} already defined")
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"register {name!r} lists a qubit twice")
        if any(q < 0 or q >= self.qubit_count for q in qubits):
            raise CircuitError(f"register {name!r} has an out-of-range qubit")
        taken = {q for qs in self.registers.values() for q in qs}
        if taken.intersection(qubits):
            raise CircuitError(f"register {name!r} overlaps an existing register")
        self.registers[name] = qubits
        return self

    def copy(self) -> "Circuit":
        return Circuit(self.qubit_count, list(self.gates), dict(self.registers))

    def inverse(self) -> "Circuit":
        """Reversed gate list with each gate replaced by its adjoint."""
        inv = {GateKind.T: GateKind.TDG, GateKind.TDG: GateKind.T,
               GateKind.S: GateKind.SDG, GateKind.SDG: GateKind.S}
        out = Circuit(self.qubit_count, registers=dict(self.registers))
        for g in reversed(self.gates):
            out.gates.append(Gate(inv.get(g.kind, g.kind), g.operands))
        return out

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.qubit_count != self.qubit_count:
            raise CircuitError("cannot concatenate circuits of different width")
        out = self.copy()
        out.gates.extend(other.gates)
        return out

    def __len__(self) -> int:
        return len(self.gates)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return (
            self.qubit_count == other.qubit_count
            and self.gates == other.gates
            and self.registers == other.registers
        )

    def count(self, kind: GateKind) -> int:
        return sum(1 for g in self.gates if g.kind is kind)

    @property
    def is_reversible(self) -> bool:
        return all(g.kind.is_reversible for g in self.gates)


@dataclass(frozen=True)
class BasisState:
    """Computational basis state; bit i of ``value`` is qubit i."""

    width: int
    value: int = 0

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("basis state width must be >= 1")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} does not fit in {self.width} qubits")

    def bit(self, q: int) -> int:
        return (self.value >> q) & 1

    def read(self, qubits) -> int:
        """Integer held by ``qubits`` (first listed qubit is the LSB)."""
        return sum(self.bit(q) << i for i, q in enumerate(qubits))

    @classmethod
    def from_bits(cls, bits) -> "BasisState":
        bits = list(bits)
        return cls(len(bits), sum(int(b) << i for i, b in enumerate(bits)))

    def __str__(self) -> str:
        return "".join(str(self.bit(q)) for q in range(self.width))


def new_circuit(qubit_count: int) -> Circuit:
    return Circuit(qubit_count)


def append(circuit: Circuit, gate: Gate) -> Circuit:
    return circuit.append(gate)


# ---------------------------------------------------------------------------
# Lowering
# ---------------------------------------------------------------------------

def toffoli_clifford_t(c1: int, c2: int, target: int) -> list[Gate]:
    """Exact, ancilla-free Toffoli over {H, T, Tdg, CNOT}.

    Seven T/Tdg gates placed on the seven parities of the CCZ phase polynomial,
    conjugated by H on the target.  Under ASAP layering the T gates fall into
    exactly three layers.  Seven CNOTs are needed for that: no 6-CNOT
    arrangement of this kind reaches ASAP T-depth 3.
    """
    a, b, t = c1, c2, target
    return [
        H(t),
        T(t),                   # x3
        CNOT(a, b),
        T(a),                   # x1
        Tdg(b),                 # x1^x2
        CNOT(a, b),
        CNOT(b, t),
        CNOT(t, a),
        Tdg(t),                 # x2^x3
        T(a),                   # x1^x2^x3
        CNOT(b, a),
        T(b),                   # x2
        Tdg(a),                 # x1^x3
        CNOT(b, t),
        CNOT(t, a),
        H(t),
    ]


def lower_to_clifford_t(circuit: Circuit) -> Circuit:
    """Replace every Toffoli with :func:`toffoli_clifford_t`; copy the rest."""
    out = Circuit(circuit.qubit_count, registers=dict(circuit.registers))
    gates = out.gates
    for g in circuit.gates:
        if g.kind is GateKind.TOFFOLI:
            gates.extend(toffoli_clifford_t(*g.operands))
        else:
            gates.append(g)
    return out


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_QASM_NAMES = {
    GateKind.X: "x",
    GateKind.CNOT: "cx",
    GateKind.TOFFOLI: "ccx",
    GateKind.H: "h",
    GateKind.T: "t",
    GateKind.TDG: "tdg",
    GateKind.S: "s",
    GateKind.SDG: "sdg",
}


def export_qasm(circuit: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.qubit_count}];"]
    for g in circuit.gates:
        args = ",".join(f"q[{q}]" for q in g.operands)
        lines.append(f"{_QASM_NAMES[g.kind]} {args};")
    return "\n".join(lines) + "\n"


def circuit_to_dict(circuit: Circuit) -> dict:
    return {
        "qubits": circuit.qubit_count,
        "registers": {name: list(qs) for name, qs in circuit.registers.items()},
        "gates": [{"kind": g.kind.value, "operands": list(g.operands)} for g in circuit.gates],
    }


def circuit_from_dict(doc: Mapping) -> Circuit:
    if not isinstance(doc, Mapping):
        raise CircuitError("circuit document must be a JSON object")
    try:
        qubits = doc["qubits"]
        regs = doc.get("registers", {})
        gates = doc["gates"]
    except KeyError as exc:
        raise CircuitError(f"circuit document missing key {exc}") from None
    if not isinstance(qubits, int) or isinstance(qubits, bool):
        raise CircuitError("'qubits' must be an integer")
    if not isinstance(regs, Mapping) or not isinstance(gates, list):
        raise CircuitError("'registers' must be an object and 'gates' a list")
    circuit = Circuit(qubits)
    for i, entry in enumerate(gates):
        if not isinstance(entry, Mapping) or set(entry) != {"kind", "operands"}:
            raise CircuitError(f"gate #{i} must have exactly 'kind' and 'operands'")
        ops = entry["operands"]
        if not isinstance(ops, list) or not all(
            isinstance(q, int) and not isinstance(q, bool) for q in ops
        ):
            raise CircuitError(f"gate #{i} operands must be a list of integers")
        try:
            kind = GateKind(entry["kind"])
        except ValueError:
            raise CircuitError(f"gate #{i} has unknown kind {entry['kind']!r}") from None
        circuit.append(Gate(kind, tuple(ops)))
    for name, qs in regs.items():
        if not isinstance(qs, list):
            raise CircuitError(f"register {name!r} must be a list")
        circuit.add_register(str(name), qs)
    return circuit


def export_json(circuit: Circuit, indent: int | None = None) -> str:
    return json.dumps(circuit_to_dict(circuit), indent=indent)


def import_json(text: str) -> Circuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitError(f"malformed JSON: {exc}") from None
    return circuit_from_dict(doc)
