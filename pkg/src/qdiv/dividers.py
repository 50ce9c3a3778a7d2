"""Restoring and non-restoring division circuits, input encoding, output decoding.

Qubit layout (LSB first within every register):

* restoring, width n:      Q = 0..n-1, R = n..2n-1,   B = 2n..3n-1
* non-restoring, width n:  Q = 0..n-1, R = n..2n-2,   B = 2n-1..3n-2

Both dividers accept operands in the positive two's-complement range
``0 <= a < 2**(n-1)`` and ``1 <= b < 2**(n-1)``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Mapping

from .blocks import BlockPorts, addsub_gates, ctrladd_gates, subtractor_gates
from .gateir import CNOT, BasisState, Circuit, CircuitError, X

WiringView = tuple[int, ...]


class DividerKind(str, Enum):
    RESTORING = "restoring"
    NONRESTORING = "nonrestoring"

    @classmethod
    def parse(cls, value: "str | DividerKind") -> "DividerKind":
        if isinstance(value, DividerKind):
            return value
        key = value.lower().replace("-", "").replace("_", "")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown divider kind {value!r}")


@dataclass(frozen=True)
class DividerLayout:
    kind: DividerKind
    n: int
    q: tuple[int, ...]
    r: tuple[int, ...]
    b: tuple[int, ...]
    quotient_source: str
    remainder_source: str

    @property
    def qubit_count(self) -> int:
        return len(self.q) + len(self.r) + len(self.b)

    def register(self, name: str) -> tuple[int, ...]:
        return {"Q": self.q, "R": self.r, "B": self.b}[name]

    def with_sources(self, quotient: str, remainder: str) -> "DividerLayout":
        return DividerLayout(self.kind, self.n, self.q, self.r, self.b, quotient, remainder)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        for key in ("q", "r", "b"):
            d[key] = list(d[key])
        return d

    @classmethod
    def from_dict(cls, doc: Mapping) -> "DividerLayout":
        try:
            layout = cls(
                DividerKind.parse(doc["kind"]),
                int(doc["n"]),
                tuple(doc["q"]),
                tuple(doc["r"]),
                tuple(doc["b"]),
                doc["quotient_source"],
                doc["remainder_source"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CircuitError(f"bad layout document: {exc}") from None
        if {layout.quotient_source, layout.remainder_source} != {"Q", "R"}:
            raise CircuitError("quotient_source/remainder_source must be 'Q' and 'R'")
        return layout


@dataclass(frozen=True)
class DivisionResult:
    quotient: int
    remainder: int
    b_out: int


def _check_width(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise CircuitError(f"divider width must be an integer >= 2, got {n!r}")


def restoring_layout(n: int) -> DividerLayout:
    _check_width(n)
    # Quotient bits accumulate in R, the remainder is left in Q; see
    # test_dividers.py::test_restoring_output_registers for the calibration.
    return DividerLayout(
        DividerKind.RESTORING, n,
        tuple(range(n)), tuple(range(n, 2 * n)), tuple(range(2 * n, 3 * n)),
        quotient_source="R", remainder_source="Q",
    )


def nonrestoring_layout(n: int) -> DividerLayout:
    _check_width(n)
    return DividerLayout(
        DividerKind.NONRESTORING, n,
        tuple(range(n)), tuple(range(n, 2 * n - 1)), tuple(range(2 * n - 1, 3 * n - 1)),
        quotient_source="Q", remainder_source="R",
    )


def restoring_view(layout: DividerLayout, i: int) -> WiringView:
    """Combined operand Y for iteration ``i`` (1 <= i <= n-1) of the restoring divider.

    Y_0..Y_{i-1} = Q_{n-i}..Q_{n-1}, Y_i..Y_{n-1} = R_0..R_{n-1-i}.
    """
    n = layout.n
    return layout.q[n - i:] + layout.r[: n - i]


def nonrestoring_view(layout: DividerLayout, i: int) -> WiringView:
    """Combined operand Y for iteration ``i`` of the non-restoring divider.

    Y_0..Y_{i-1} = R_{n-1-i}..R_{n-2}, Y_i..Y_{n-1} = Q_0..Q_{n-1-i}.
    """
    n = layout.n
    return layout.r[n - 1 - i:] + layout.q[: n - i]


def _new_divider_circuit(layout: DividerLayout) -> Circuit:
    c = Circuit(layout.qubit_count)
    c.add_register("Q", layout.q).add_register("R", layout.r).add_register("B", layout.b)
    return c


def build_restoring(n: int) -> tuple[Circuit, DividerLayout]:
    layout = restoring_layout(n)
    c = _new_divider_circuit(layout)
    B = layout.b
    for i in range(1, n + 1):
        if i < n:
            y = restoring_view(layout, i)
            flag = layout.r[n - i]
        else:
            y = layout.q
            flag = layout.r[0]
        c.extend(subtractor_gates(BlockPorts(B, y)))
        c.append(CNOT(y[-1], flag))
        c.extend(ctrladd_gates(BlockPorts(B, y, flag)))
        c.append(X(flag))
    return c, layout


def build_nonrestoring(n: int) -> tuple[Circuit, DividerLayout]:
    layout = nonrestoring_layout(n)
    c = _new_divider_circuit(layout)
    Q, R, B = layout.q, layout.r, layout.b
    c.extend(subtractor_gates(BlockPorts(B, Q)))
    for i in range(1, n):
        flag = Q[n - i]
        c.append(X(flag))
        c.extend(addsub_gates(BlockPorts(B, nonrestoring_view(layout, i), flag)))
    c.extend(ctrladd_gates(BlockPorts(B[: n - 1], R, Q[0])))
    c.append(X(Q[0]))
    return c, layout


def build_divider(kind: "str | DividerKind", n: int) -> tuple[Circuit, DividerLayout]:
    kind = DividerKind.parse(kind)
    if kind is DividerKind.RESTORING:
        return build_restoring(n)
    return build_nonrestoring(n)


def check_operands(n: int, a: int, b: int) -> None:
    limit = 1 << (n - 1)
    if not 0 <= a < limit:
        raise ValueError(f"dividend {a} outside [0, {limit}) for n={n}")
    if not 1 <= b < limit:
        raise ValueError(f"divisor {b} outside [1, {limit}) for n={n}")


def encode_value(layout: DividerLayout, a: int, b: int) -> int:
    """Packed basis index for inputs (a, b); no domain check."""
    n = layout.n
    if not 0 <= a < (1 << n) or not 0 <= b < (1 << n):
        raise ValueError(f"operands must fit in {n} bits")
    if layout.kind is DividerKind.RESTORING:
        bits = [(q, (a >> j) & 1) for j, q in enumerate(layout.q)]
    else:
        bits = [(layout.q[0], (a >> (n - 1)) & 1)]
        bits += [(r, (a >> j) & 1) for j, r in enumerate(layout.r)]
    bits += [(q, (b >> j) & 1) for j, q in enumerate(layout.b)]
    return sum(v << q for q, v in bits)


def encode_inputs(layout: DividerLayout, a: int, b: int) -> BasisState:
    check_operands(layout.n, a, b)
    return BasisState(layout.qubit_count, encode_value(layout, a, b))


def decode_value(layout: DividerLayout, value: int) -> DivisionResult:
    def read(qubits):
        return sum(((value >> q) & 1) << i for i, q in enumerate(qubits))

    return DivisionResult(
        quotient=read(layout.register(layout.quotient_source)),
        remainder=read(layout.register(layout.remainder_source)),
        b_out=read(layout.b),
    )


def decode_outputs(layout: DividerLayout, final_state: BasisState) -> DivisionResult:
    return decode_value(layout, final_state.value)
