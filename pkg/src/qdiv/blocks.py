"""In-place ripple-carry arithmetic blocks.

All four blocks share one ancilla-free ripple-carry skeleton.  The carry chain
is computed into the ``a`` register, sum bits are written into ``b`` while the
carries are uncomputed top-down, and ``a`` comes back unchanged.  There is no
carry-out.  The gate order is that of the 4-bit conditional adder figure
(columns read left to right), generalised to width ``n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .gateir import CNOT, Circuit, CircuitError, Gate, Toffoli, X


@dataclass(frozen=True)
class BlockPorts:
    """Qubit wiring for one block.  ``a[0]`` and ``b[0]`` are the LSBs."""

    a: tuple[int, ...]
    b: tuple[int, ...]
    ctrl: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        object.__setattr__(self, "b", tuple(self.b))
        if len(self.a) == 0:
            raise CircuitError("block width must be >= 1")
        if len(self.a) != len(self.b):
            raise CircuitError(f"port widths differ: a={len(self.a)} b={len(self.b)}")
        used = list(self.a) + list(self.b)
        if self.ctrl is not None:
            used.append(self.ctrl)
        if len(set(used)) != len(used):
            raise CircuitError("block ports must be pairwise disjoint")

    @property
    def width(self) -> int:
        return len(self.a)

    @classmethod
    def contiguous(cls, n: int, with_ctrl: bool = False) -> "BlockPorts":
        """Standalone layout: a = 0..n-1, b = n..2n-1, ctrl = 2n."""
        return cls(tuple(range(n)), tuple(range(n, 2 * n)), 2 * n if with_ctrl else None)


def _ripple_add(a: Sequence[int], b: Sequence[int], ctrl: int | None) -> list[Gate]:
    # ctrl=None: plain adder.  Otherwise the n sum-writes are promoted to
    # Toffolis on ctrl, and ctrl=0 leaves every wire unchanged.
    n = len(a)
    gates: list[Gate] = []

    def write_sum(i: int) -> Gate:
        return CNOT(a[i], b[i]) if ctrl is None else Toffoli(ctrl, a[i], b[i])

    for i in range(1, n):
        gates.append(CNOT(a[i], b[i]))
    for i in range(n - 2, 0, -1):
        gates.append(CNOT(a[i], a[i + 1]))
    for i in range(n - 1):
        gates.append(Toffoli(b[i], a[i], a[i + 1]))
    gates.append(write_sum(n - 1))
    for i in range(n - 2, -1, -1):
        gates.append(Toffoli(b[i], a[i], a[i + 1]))
        gates.append(write_sum(i))
    for i in range(1, n - 1):
        gates.append(CNOT(a[i], a[i + 1]))
    for i in range(1, n):
        gates.append(CNOT(a[i], b[i]))
    return gates


def adder_gates(ports: BlockPorts) -> list[Gate]:
    """|a, b> -> |a, (a + b) mod 2^n>; 2n-2 Toffolis."""
    return _ripple_add(ports.a, ports.b, None)


def subtractor_gates(ports: BlockPorts) -> list[Gate]:
    """|a, b> -> |a, (b - a) mod 2^n>, computed as NOT(NOT(b) + a)."""
    flips = [X(q) for q in ports.b]
    return flips + adder_gates(ports) + flips


def addsub_gates(ports: BlockPorts) -> list[Gate]:
    """ctrl=0: b + a.  ctrl=1: b - a.  Conditioning costs only CNOTs."""
    if ports.ctrl is None:
        raise CircuitError("Add-Sub needs a ctrl port")
    flips = [CNOT(ports.ctrl, q) for q in ports.b]
    return flips + adder_gates(ports) + flips


def ctrladd_gates(ports: BlockPorts) -> list[Gate]:
    """ctrl=1: b + a.  ctrl=0: identity.  3n-2 Toffolis."""
    if ports.ctrl is None:
        raise CircuitError("Ctrl-Add needs a ctrl port")
    return _ripple_add(ports.a, ports.b, ports.ctrl)


def _standalone(gates: list[Gate], ports: BlockPorts) -> Circuit:
    used = ports.a + ports.b + ((ports.ctrl,) if ports.ctrl is not None else ())
    c = Circuit(max(used) + 1)
    c.add_register("a", ports.a).add_register("b", ports.b)
    if ports.ctrl is not None:
        c.add_register("ctrl", (ports.ctrl,))
    return c.extend(gates)


def build_adder(ports: BlockPorts) -> Circuit:
    if ports.ctrl is not None:
        raise CircuitError("the plain adder takes no ctrl port")
    return _standalone(adder_gates(ports), ports)


def build_subtractor(ports: BlockPorts) -> Circuit:
    if ports.ctrl is not None:
        raise CircuitError("the subtractor takes no ctrl port")
    return _standalone(subtractor_gates(ports), ports)


def build_addsub(ports: BlockPorts) -> Circuit:
    return _standalone(addsub_gates(ports), ports)


def build_ctrladd(ports: BlockPorts) -> Circuit:
    return _standalone(ctrladd_gates(ports), ports)


BLOCK_BUILDERS = {
    "adder": (build_adder, False),
    "subtractor": (build_subtractor, False),
    "addsub": (build_addsub, True),
    "ctrladd": (build_ctrladd, True),
}


def build_block(kind: str, n: int) -> Circuit:
    """Standalone block circuit of width ``n`` on contiguous ports."""
    try:
        builder, with_ctrl = BLOCK_BUILDERS[kind]
    except KeyError:
        raise CircuitError(f"unknown block kind {kind!r}") from None
    if n < 1:
        raise CircuitError("block width must be >= 1")
    return builder(BlockPorts.contiguous(n, with_ctrl))
