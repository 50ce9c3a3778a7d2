"""Command-line front end.

Exit codes: 0 success, 1 verification or expectation failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analyze, baselines
from .blocks import BLOCK_BUILDERS, build_block
from .dividers import build_divider
from .gateir import CircuitError, export_json, export_qasm, import_json, lower_to_clifford_t
from .sim import verify_block, verify_divider

DIVIDER_KINDS = ("restoring", "nonrestoring")
BLOCK_KINDS = tuple(BLOCK_BUILDERS)
ALL_KINDS = DIVIDER_KINDS + BLOCK_KINDS

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_BLOCK_VERIFY_WIDTH = 10


class UsageError(Exception):
    pass


def _check_width(kind: str, n: int) -> None:
    if kind in DIVIDER_KINDS and n < 2:
        raise UsageError(f"--n must be >= 2 for {kind} dividers")
    if kind in BLOCK_KINDS and n < 1:
        raise UsageError(f"--n must be >= 1 for the {kind} block")


def _build(kind: str, n: int):
    _check_width(kind, n)
    if kind in DIVIDER_KINDS:
        return build_divider(kind, n)
    return build_block(kind, n), None


def _expected(kind: str, n: int) -> dict:
    """Closed-form T-count / qubits / claimed T-depth for a kind and width."""
    if kind in DIVIDER_KINDS:
        design = f"proposed_{kind}"
        return {
            "t_count": baselines.model_tcount(design, n),
            "qubits": baselines.model_qubits(design, n),
            "t_depth": baselines.model_tdepth(design, n),
        }
    if kind == "ctrladd":
        return {"t_count": 21 * n - 14, "qubits": 2 * n + 1, "t_depth": 2 * n}
    return {"t_count": 14 * n - 14, "qubits": 2 * n + (kind == "addsub"), "t_depth": 10}


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror or exc}") from None


def _serialize(circuit, fmt: str) -> str:
    return export_qasm(circuit) if fmt == "qasm" else export_json(circuit, indent=None) + "\n"


def cmd_build(args) -> int:
    circuit, layout = _build(args.kind, args.n)
    if args.lower:
        circuit = lower_to_clifford_t(circuit)
    summary = (f"kind={args.kind} n={args.n} qubits={circuit.qubit_count} "
               f"gates={len(circuit)} t_count={analyze.t_count(circuit)}")
    _write(_serialize(circuit, args.format), args.out)
    if args.layout_out:
        if layout is None:
            raise UsageError("--layout-out applies to dividers only")
        _write(json.dumps(layout.to_dict()) + "\n", args.layout_out)
    print(summary, file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_verify(args) -> int:
    _check_width(args.kind, args.n)
    jobs = args.jobs or os.cpu_count() or 1
    if args.kind in DIVIDER_KINDS:
        if args.n > 8:
            raise UsageError("divider verification supports --n up to 8")
        report = verify_divider(args.kind, args.n, jobs=jobs, probe_invalid=args.probe_invalid)
    else:
        if args.n > MAX_BLOCK_VERIFY_WIDTH:
            raise UsageError(f"block verification supports --n up to {MAX_BLOCK_VERIFY_WIDTH}")
        if args.probe_invalid:
            raise UsageError("--probe-invalid applies to dividers only")
        report = verify_block(args.kind, args.n, jobs=jobs)
    _write(report.to_json() + "\n", args.out)
    status = "ok" if report.ok else "FAILED"
    print(f"{args.kind} n={args.n}: {report.pairs_tested} inputs, "
          f"{len(report.failures)} failures, {status}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_resources(args) -> int:
    if args.input is not None:
        if args.kind or args.n is not None:
            raise UsageError("--in cannot be combined with --kind/--n")
        text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
        circuit = import_json(text)
        kind, n = "circuit", None
    else:
        if not args.kind or args.n is None:
            raise UsageError("resources needs --kind and --n, or --in")
        circuit, _ = _build(args.kind, args.n)
        kind, n = args.kind, args.n
    report = analyze.resource_report(circuit)
    doc = {"kind": kind, "n": n, **report.to_dict()}

    failed = False
    if kind != "circuit":
        exp = _expected(kind, n)
        doc["claimed"] = exp
        doc["t_depth_delta"] = None if exp["t_depth"] is None else report.t_depth - exp["t_depth"]
        doc["max_register_t_layers"] = max(report.per_register_t_layers.values(), default=0)
        if args.expect:
            checks = {"t_count": report.t_count == exp["t_count"],
                      "qubits": report.qubit_count == exp["qubits"]}
            doc["expect"] = checks
            failed = not all(checks.values())
    elif args.expect:
        raise UsageError("--expect needs --kind and --n")

    if args.csv:
        _write(analyze.rows_to_csv([analyze.report_row(report, n, kind)]), args.out)
    elif args.json:
        _write(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        lines = [f"kind={kind} n={n if n is not None else '-'}",
                 f"qubits={report.qubit_count} t_count={report.t_count} "
                 f"t_depth={report.t_depth} total_depth={report.total_depth}"]
        if "claimed" in doc:
            c = doc["claimed"]
            lines.append(f"claimed: t_count={c['t_count']} qubits={c['qubits']} "
                         f"t_depth={c['t_depth'] if c['t_depth'] is not None else 'NA'} "
                         f"(t_depth delta {doc['t_depth_delta']})")
        if "expect" in doc:
            lines.append("expect: " + ("match" if not failed else "MISMATCH " + json.dumps(doc["expect"])))
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_tables(args) -> int:
    table = baselines.reproduce_table(args.table, measure_upto=args.measure_upto)
    text = table.to_csv() if args.csv else table.to_markdown()
    if args.ledger:
        text += "\nNotes:\n" + "".join(f"- {note}\n" for note in baselines.DISCREPANCY_NOTES)
    if table.mismatches:
        text += "\nFormula/measurement mismatches:\n" + "".join(f"- {m}\n" for m in table.mismatches)
    _write(text, args.out)
    return EXIT_FAIL if table.mismatches else EXIT_OK


def cmd_export(args) -> int:
    text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
    circuit = import_json(text)
    if args.lower:
        circuit = lower_to_clifford_t(circuit)
    _write(_serialize(circuit, args.format), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qdiv", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="generate a circuit file")
    b.add_argument("--kind", required=True, choices=ALL_KINDS)
    b.add_argument("--n", required=True, type=int)
    b.add_argument("--lower", action="store_true", help="lower Toffolis to Clifford+T")
    b.add_argument("--out", help="output path (default: stdout)")
    b.add_argument("--format", choices=("qasm", "json"), default="qasm")
    b.add_argument("--layout-out", help="also write the divider layout JSON here")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="exhaustive bit-level verification")
    v.add_argument("--kind", required=True, choices=ALL_KINDS)
    v.add_argument("--n", required=True, type=int)
    v.add_argument("--jobs", type=int, default=None)
    v.add_argument("--probe-invalid", action="store_true",
                   help="also run b=0 and out-of-range dividends (recorded, not checked)")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("resources", help="T-count, T-depth, depth and qubits")
    r.add_argument("--kind", choices=ALL_KINDS)
    r.add_argument("--n", type=int)
    r.add_argument("--in", dest="input", help="circuit JSON file, or - for stdin")
    fmt = r.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    r.add_argument("--expect", action="store_true",
                   help="exit 1 unless T-count and qubits match the closed forms")
    r.add_argument("--out")
    r.set_defaults(func=cmd_resources)

    t = sub.add_parser("tables", help="regenerate a comparison table")
    t.add_argument("--table", required=True, choices=baselines.TABLE_IDS)
    t.add_argument("--measure-upto", type=int, default=None,
                   help="build circuits up to this n and cross-check the proposed column")
    t.add_argument("--ledger", action="store_true", help="append the discrepancy notes")
    t.add_argument("--csv", action="store_true")
    t.add_argument("--out")
    t.set_defaults(func=cmd_tables)

    e = sub.add_parser("export", help="convert a circuit JSON file")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--format", choices=("qasm", "json"), default="qasm")
    e.add_argument("--lower", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CircuitError, OSError) as exc:
        print(f"qdiv {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
