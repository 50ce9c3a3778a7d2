"""Bit-level and state-vector simulation, plus exhaustive verification sweeps.

Both engines index basis states little-endian: qubit i is bit i of the index.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .blocks import build_block
from .dividers import (
    DividerKind,
    DividerLayout,
    build_divider,
    decode_value,
    encode_value,
)
from .gateir import BasisState, Circuit, CircuitError, GateKind, lower_to_clifford_t

DEFAULT_STATEVECTOR_CAP = 16
PERMUTATION_CAP = 24


class SimulationError(CircuitError):
    pass


# ---------------------------------------------------------------------------
# Reversible (classical) engine
# ---------------------------------------------------------------------------

def _compile_reversible(circuit: Circuit) -> list[tuple[int, int]]:
    ops = []
    for g in circuit.gates:
        if not g.kind.is_reversible:
            raise SimulationError(
                f"{g} is not a classical gate; lower the circuit with "
                "lower_to_clifford_t and use run_statevector instead"
            )
        cmask = 0
        for c in g.controls:
            cmask |= 1 << c
        ops.append((cmask, 1 << g.target))
    return ops


def run_reversible(circuit: Circuit, state: BasisState) -> BasisState:
    if state.width != circuit.qubit_count:
        raise SimulationError(
            f"state has {state.width} qubits, circuit has {circuit.qubit_count}"
        )
    v = state.value
    for cmask, tbit in _compile_reversible(circuit):
        if v & cmask == cmask:
            v ^= tbit
    return BasisState(state.width, v)


def run_reversible_batch(circuit: Circuit, values) -> np.ndarray:
    """Apply ``circuit`` to many basis indices at once (uint64 array in, array out)."""
    if circuit.qubit_count > 63:
        raise SimulationError("batch simulation supports at most 63 qubits")
    v = np.array(values, dtype=np.uint64, copy=True)
    for cmask, tbit in _compile_reversible(circuit):
        if cmask:
            cm = np.uint64(cmask)
            hit = (v & cm) == cm
            v[hit] ^= np.uint64(tbit)
        else:
            v ^= np.uint64(tbit)
    return v


def permutation_of(circuit: Circuit, cap: int = PERMUTATION_CAP) -> np.ndarray:
    """``perm[x]`` is the output basis index for input ``x``."""
    if circuit.qubit_count > cap:
        raise SimulationError(f"{circuit.qubit_count} qubits exceeds permutation cap {cap}")
    return run_reversible_batch(circuit, np.arange(1 << circuit.qubit_count, dtype=np.uint64))


# ---------------------------------------------------------------------------
# State-vector engine
# ---------------------------------------------------------------------------

_SQRT1_2 = 1 / np.sqrt(2)
_PHASES = {
    GateKind.T: np.exp(1j * np.pi / 4),
    GateKind.TDG: np.exp(-1j * np.pi / 4),
    GateKind.S: 1j,
    GateKind.SDG: -1j,
}


def basis_statevector(width: int, value: int = 0) -> np.ndarray:
    psi = np.zeros(1 << width, dtype=complex)
    psi[value] = 1.0
    return psi


def _evolve(circuit: Circuit, amps: np.ndarray) -> np.ndarray:
    # amps: (2**q, k) block of column states.  Tensor axis for qubit i is
    # q-1-i because C order makes the first axis the most significant bit.
    q = circuit.qubit_count
    k = amps.shape[1]
    t = np.array(amps, dtype=complex).reshape((2,) * q + (k,))

    def at(*fixed):
        idx = [slice(None)] * (q + 1)
        for ax, val in fixed:
            idx[ax] = val
        return tuple(idx)

    for g in circuit.gates:
        axes = [q - 1 - op for op in g.operands]
        kind = g.kind
        if kind in _PHASES:
            t[at((axes[0], 1))] *= _PHASES[kind]
        elif kind is GateKind.H:
            zero, one = at((axes[0], 0)), at((axes[0], 1))
            lo, hi = t[zero].copy(), t[one].copy()
            t[zero] = (lo + hi) * _SQRT1_2
            t[one] = (lo - hi) * _SQRT1_2
        else:
            # X / CNOT / Toffoli: swap the target's 0 and 1 slices where all controls are 1
            ctrls = [(ax, 1) for ax in axes[:-1]]
            zero, one = at(*ctrls, (axes[-1], 0)), at(*ctrls, (axes[-1], 1))
            lo = t[zero].copy()
            t[zero] = t[one]
            t[one] = lo
    return t.reshape(1 << q, k)


def run_statevector(circuit: Circuit, state, max_qubits: int = DEFAULT_STATEVECTOR_CAP) -> np.ndarray:
    """Apply every gate's unitary to ``state`` (amplitude vector or BasisState)."""
    q = circuit.qubit_count
    if q > max_qubits:
        raise SimulationError(f"{q} qubits exceeds state-vector cap {max_qubits}")
    if isinstance(state, BasisState):
        state = basis_statevector(state.width, state.value)
    psi = np.asarray(state, dtype=complex)
    if psi.shape != (1 << q,):
        raise SimulationError(f"state vector must have length {1 << q}")
    return _evolve(circuit, psi[:, None])[:, 0]


def unitary_of(circuit: Circuit, max_qubits: int = 12) -> np.ndarray:
    """Dense unitary; column x is the image of basis state x."""
    q = circuit.qubit_count
    if q > max_qubits:
        raise SimulationError(f"{q} qubits exceeds unitary cap {max_qubits}")
    return _evolve(circuit, np.eye(1 << q, dtype=complex))


def check_lowering_equivalence(
    circuit: Circuit,
    tolerance: float = 1e-9,
    max_qubits: int = DEFAULT_STATEVECTOR_CAP,
    chunk: int = 256,
) -> bool:
    """Lowered state-vector run vs. bit-level run of ``circuit`` on every basis input.

    Passes when every output amplitude is within ``tolerance`` of the exact
    basis vector the reversible engine predicts (phase included).
    """
    return lowering_deviation(circuit, max_qubits, chunk) <= tolerance


def lowering_deviation(
    circuit: Circuit, max_qubits: int = DEFAULT_STATEVECTOR_CAP, chunk: int = 256
) -> float:
    q = circuit.qubit_count
    if q > max_qubits:
        raise SimulationError(f"{q} qubits exceeds state-vector cap {max_qubits}")
    perm = permutation_of(circuit).astype(np.int64)
    lowered = lower_to_clifford_t(circuit)
    dim = 1 << q
    worst = 0.0
    for start in range(0, dim, chunk):
        cols = np.arange(start, min(start + chunk, dim))
        block = np.zeros((dim, len(cols)), dtype=complex)
        block[cols, np.arange(len(cols))] = 1.0
        out = _evolve(lowered, block)
        out[perm[cols], np.arange(len(cols))] -= 1.0
        worst = max(worst, float(np.abs(out).max()))
    return worst


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    kind: str
    n: int
    pairs_tested: int = 0
    failures: list[dict] = field(default_factory=list)
    b_restored_everywhere: bool = True
    quotient_source: str | None = None
    remainder_source: str | None = None
    probe: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.b_restored_everywhere

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _read(values: np.ndarray, qubits) -> np.ndarray:
    out = np.zeros(values.shape, dtype=np.int64)
    for i, q in enumerate(qubits):
        out |= ((values >> np.uint64(q)) & np.uint64(1)).astype(np.int64) << i
    return out


def _simulate(circuit: Circuit, inputs: np.ndarray, jobs: int | None) -> np.ndarray:
    jobs = jobs or os.cpu_count() or 1
    if jobs <= 1 or len(inputs) < 4096:
        return run_reversible_batch(circuit, inputs)
    chunks = np.array_split(inputs, jobs)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(lambda ch: run_reversible_batch(circuit, ch), chunks))
    return np.concatenate(parts)


def _discover(outputs: np.ndarray, layout: DividerLayout, expected: np.ndarray) -> str | None:
    for name in ("Q", "R"):
        if np.array_equal(_read(outputs, layout.register(name)), expected):
            return name
    return None


def verify_divider(
    kind: "str | DividerKind",
    n: int,
    jobs: int | None = 1,
    probe_invalid: bool = False,
) -> VerificationReport:
    """Sweep every valid (a, b) through the bit-level simulator."""
    if not 2 <= n <= 8:
        raise ValueError(f"verify_divider supports 2 <= n <= 8, got {n}")
    circuit, layout = build_divider(kind, n)
    limit = 1 << (n - 1)
    pairs = [(a, b) for a in range(limit) for b in range(1, limit)]
    a_arr = np.array([p[0] for p in pairs], dtype=np.int64)
    b_arr = np.array([p[1] for p in pairs], dtype=np.int64)
    inputs = np.array([encode_value(layout, a, b) for a, b in pairs], dtype=np.uint64)
    outputs = _simulate(circuit, inputs, jobs)

    want_q, want_r = a_arr // b_arr, a_arr % b_arr
    got_q = _read(outputs, layout.register(layout.quotient_source))
    got_r = _read(outputs, layout.register(layout.remainder_source))
    got_b = _read(outputs, layout.b)

    report = VerificationReport(layout.kind.value, n, pairs_tested=len(pairs))
    report.b_restored_everywhere = bool(np.array_equal(got_b, b_arr))
    report.quotient_source = _discover(outputs, layout, want_q)
    report.remainder_source = _discover(outputs, layout, want_r)
    bad = np.nonzero((got_q != want_q) | (got_r != want_r) | (got_b != b_arr))[0]
    for idx in bad:
        report.failures.append({
            "a": int(a_arr[idx]), "b": int(b_arr[idx]),
            "decoded": [int(got_q[idx]), int(got_r[idx]), int(got_b[idx])],
            "expected": [int(want_q[idx]), int(want_r[idx]), int(b_arr[idx])],
        })

    if probe_invalid:
        full = 1 << n
        odd = [(a, b) for a in range(full) for b in range(full)
               if b == 0 or a >= limit or b >= limit]
        outs = run_reversible_batch(
            circuit, np.array([encode_value(layout, a, b) for a, b in odd], dtype=np.uint64))
        for (a, b), v in zip(odd, outs):
            res = decode_value(layout, int(v))
            report.probe.append({"a": a, "b": b, "quotient": res.quotient,
                                 "remainder": res.remainder, "b_out": res.b_out})
    return report


def _block_oracle(kind: str, n: int, a, b, ctrl):
    mask = (1 << n) - 1
    add, sub = (b + a) & mask, (b - a) & mask
    if kind == "adder":
        return add
    if kind == "subtractor":
        return sub
    if kind == "addsub":
        return np.where(ctrl == 1, sub, add)
    if kind == "ctrladd":
        return np.where(ctrl == 1, add, b)
    raise ValueError(f"unknown block kind {kind!r}")


def verify_block(kind: str, n: int, jobs: int | None = 1) -> VerificationReport:
    """Exhaustive sweep of a standalone block against its modular-arithmetic oracle.

    ``b_restored_everywhere`` here covers the unchanged ports (a and ctrl).
    """
    circuit = build_block(kind, n)
    regs = circuit.registers
    has_ctrl = "ctrl" in regs
    size = 1 << n
    a, b = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    a, b = a.ravel(), b.ravel()
    ctrl = np.zeros_like(a)
    if has_ctrl:
        a, b = np.concatenate([a, a]), np.concatenate([b, b])
        ctrl = np.repeat([0, 1], size * size)
    inputs = np.zeros(a.shape, dtype=np.uint64)
    for i, q in enumerate(regs["a"]):
        inputs |= (((a >> i) & 1).astype(np.uint64)) << np.uint64(q)
    for i, q in enumerate(regs["b"]):
        inputs |= (((b >> i) & 1).astype(np.uint64)) << np.uint64(q)
    if has_ctrl:
        inputs |= ctrl.astype(np.uint64) << np.uint64(regs["ctrl"][0])
    out = _simulate(circuit, inputs, jobs)

    want = _block_oracle(kind, n, a, b, ctrl)
    got_b = _read(out, regs["b"])
    got_a = _read(out, regs["a"])
    got_c = _read(out, regs["ctrl"]) if has_ctrl else ctrl
    report = VerificationReport(kind, n, pairs_tested=len(a))
    report.b_restored_everywhere = bool(np.array_equal(got_a, a) and np.array_equal(got_c, ctrl))
    for idx in np.nonzero((got_b != want) | (got_a != a) | (got_c != ctrl))[0]:
        report.failures.append({
            "a": int(a[idx]), "b": int(b[idx]), "ctrl": int(ctrl[idx]),
            "decoded": [int(got_a[idx]), int(got_b[idx]), int(got_c[idx])],
            "expected": [int(a[idx]), int(want[idx]), int(ctrl[idx])],
        })
    return report
