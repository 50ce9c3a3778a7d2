"""Clifford+T restoring and non-restoring integer dividers: build, simulate, cost."""
from .analyze import ResourceReport, resource_report, schedule_asap, t_count, t_depth
from .blocks import BlockPorts, build_adder, build_addsub, build_ctrladd, build_subtractor
from .dividers import (
    DividerLayout,
    DivisionResult,
    build_nonrestoring,
    build_restoring,
    decode_outputs,
    encode_inputs,
)
from .gateir import (
    BasisState,
    Circuit,
    Gate,
    GateKind,
    export_json,
    export_qasm,
    import_json,
    lower_to_clifford_t,
    new_circuit,
)
from .sim import (
    check_lowering_equivalence,
    permutation_of,
    run_reversible,
    run_statevector,
    verify_divider,
)

__version__ = "0.1.0"
