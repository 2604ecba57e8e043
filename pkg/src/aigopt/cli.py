"""Command-line surface: synthesis runs, class lists, graphs, bound checks.

Machine-readable JSON goes to stdout as a single document; human-readable
tables go to stderr.  Exit codes: 0 success (or bound holds), 1 usage error,
2 upper-bound/unknown result, 3 bound violation, 4 incomplete store.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

from .aig import from_aiger, to_aiger
from .mutation import IncompleteStoreError, MutationGraph, build_graph, verify_bound
from .npn import enumerate_classes
from .repair import repair_clear, repair_multi, repair_set
from .store import ResultRecord, append_record, load_store, record_from_result
from .synthesis import (
    Backend,
    PRUNE_ALL,
    SearchInconclusiveError,
    Status,
    SynthesisConfig,
    brute_oracle,
    encode_cnf,
    opt_size,
)
from .truthtable import Assignment, TruthTable, parse_hex

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UPPER_BOUND = 2
EXIT_BOUND_VIOLATION = 3
EXIT_INCOMPLETE_STORE = 4

STORE_ENV = "AIGOPT_STORE"


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _human(text: str) -> None:
    print(text, file=sys.stderr)


def _store_path(args) -> Path | None:
    if args.store:
        return Path(args.store)
    env = os.environ.get(STORE_ENV)
    return Path(env) if env else None


def _config(args) -> SynthesisConfig:
    return SynthesisConfig(
        max_gates=args.max_gates,
        backend=Backend(args.backend),
        time_budget=args.budget_secs,
        pruning=PRUNE_ALL,
    )


def _synth_one(tt_hex: str, n: int, cfg_fields: tuple) -> dict:
    """Worker-friendly synthesis: plain-dict in, plain-dict out."""
    max_gates, backend, budget = cfg_fields
    cfg = SynthesisConfig(
        max_gates=max_gates, backend=Backend(backend), time_budget=budget
    )
    tt = parse_hex(tt_hex, n)
    try:
        result = opt_size(tt, cfg)
    except SearchInconclusiveError as exc:
        return {
            "tt": tt_hex,
            "n": n,
            "error": "inconclusive",
            "max_gates": exc.max_gates,
            "exhausted_below": exc.exhausted_below,
        }
    return asdict(record_from_result(result))


def cmd_synth(args) -> int:
    try:
        tt = parse_hex(args.tt, args.n)
    except ValueError as exc:
        _human(f"error: {exc}")
        return EXIT_USAGE

    if args.backend == Backend.CNF_EXPORT.value:
        return _synth_cnf_export(args, tt)

    store = _store_path(args)
    if args.campaign:
        return _synth_campaign(args, store)

    outcome = _synth_one(tt.hex(), args.n, (args.max_gates, args.backend, args.budget_secs))
    if "error" in outcome:
        _emit({"schema": "aigopt.synth/1", **outcome})
        _human(
            f"{tt.hex()}: inconclusive, no witness within {outcome['max_gates']} "
            f"gates (infeasible through k={outcome['exhausted_below']})"
        )
        return EXIT_UPPER_BOUND
    record = ResultRecord(**outcome)
    if store is not None:
        append_record(store, record)
    _emit({"schema": "aigopt.synth/1", **outcome})
    _human(
        f"{record.tt_hex} (n={record.n}): size {record.size} [{record.status}] "
        f"exhausted_below={record.exhausted_below} in {record.elapsed_ms} ms"
    )
    return EXIT_OK if record.status == Status.EXACT.value else EXIT_UPPER_BOUND


def _synth_cnf_export(args, tt: TruthTable) -> int:
    out_dir = Path(args.cnf_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    hi = args.max_gates
    for k in range(1, hi + 1):
        path = out_dir / f"{tt.hex()}_n{tt.n}_k{k}.cnf"
        path.write_text(encode_cnf(tt, k), encoding="utf-8")
        written.append(str(path))
    _emit(
        {
            "schema": "aigopt.cnf-export/1",
            "tt": tt.hex(),
            "n": tt.n,
            "k_range": [1, hi],
            "files": written,
        }
    )
    _human(
        f"wrote {len(written)} DIMACS files to {out_dir}; solve externally and "
        "import models with aigopt.synthesis.decode_model"
    )
    return EXIT_OK


def _synth_campaign(args, store: Path | None) -> int:
    if store is None:
        _human("error: campaign mode requires --store or " + STORE_ENV)
        return EXIT_USAGE
    table = enumerate_classes(args.n)
    done: set[str] = set()
    if store.exists():
        loaded = load_store(store)
        done = {
            rec.tt_hex
            for rec in loaded.best.values()
            if rec.status == Status.EXACT.value
        }
    todo = [c.canon.hex() for c in table if c.canon.hex() not in done]
    _human(f"campaign: {len(table)} classes, {len(done)} already exact, {len(todo)} to run")
    cfg_fields = (args.max_gates, args.backend, args.budget_secs)
    results = []
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_synth_one, h, args.n, cfg_fields) for h in todo]
            for fut in futures:
                results.append(fut.result())
    else:
        for h in todo:
            results.append(_synth_one(h, args.n, cfg_fields))

    exact = upper = failed = 0
    for outcome in results:
        if "error" in outcome:
            failed += 1
            _human(f"{outcome['tt']}: inconclusive within {outcome['max_gates']} gates")
            continue
        record = ResultRecord(**outcome)
        append_record(store, record)
        if record.status == Status.EXACT.value:
            exact += 1
        else:
            upper += 1
        _human(f"{record.tt_hex}: size {record.size} [{record.status}]")
    _emit(
        {
            "schema": "aigopt.campaign/1",
            "n": args.n,
            "classes": len(table),
            "skipped_exact": len(done),
            "new_exact": exact,
            "new_upper_bound": upper,
            "inconclusive": failed,
            "store": str(store),
        }
    )
    return EXIT_OK if failed == 0 and upper == 0 else EXIT_UPPER_BOUND


def cmd_classify(args) -> int:
    started = time.monotonic()
    table = enumerate_classes(args.n)
    elapsed = time.monotonic() - started
    rows = [
        {"class_index": c.class_index, "canon": c.canon.hex(), "orbit_size": c.orbit_size}
        for c in table
    ]
    if args.format == "csv":
        print("class_index,canon,orbit_size")
        for r in rows:
            print(f"{r['class_index']},{r['canon']},{r['orbit_size']}")
    else:
        _emit(
            {
                "schema": "aigopt.classify/1",
                "n": args.n,
                "count": len(table),
                "elapsed_ms": int(elapsed * 1000),
                "classes": rows,
            }
        )
    _human(f"{len(table)} NPN classes at n={args.n} ({elapsed:.2f}s)")
    return EXIT_OK


def _graph_from_store(args) -> tuple[MutationGraph | None, int]:
    store = _store_path(args)
    if store is None or not store.exists():
        _human("error: graph construction requires an existing --store")
        return None, EXIT_USAGE
    loaded = load_store(store)
    for issue in loaded.issues:
        _human(f"store line {issue.line_number} rejected: {issue.reason}")
    table = enumerate_classes(args.n)
    try:
        graph = build_graph(table, loaded.by_bits())
    except IncompleteStoreError as exc:
        _emit(
            {
                "schema": "aigopt.graph/1",
                "n": args.n,
                "error": "incomplete-store",
                "missing": exc.missing,
            }
        )
        _human(f"store is missing {len(exc.missing)} classes: {', '.join(exc.missing[:8])} ...")
        return None, EXIT_INCOMPLETE_STORE
    return graph, EXIT_OK


def _render_histogram(graph: MutationGraph) -> str:
    total = graph.summary.exact_edge_total
    lines = ["|delta|  edges  %"]
    for delta in sorted(graph.histogram):
        count = graph.histogram[delta]
        lines.append(f"{delta:>7}  {count:>5}  {100 * count / total:.1f}")
    lines.append(f"  total  {total:>5}  100.0")
    return "\n".join(lines)


def cmd_graph(args) -> int:
    graph, code = _graph_from_store(args)
    if graph is None:
        return code
    edges = [
        {
            "a": graph.classes[e.a].canon.hex(),
            "b": graph.classes[e.b].canon.hex(),
            "delta": e.delta,
            "multiplicity": e.multiplicity,
        }
        for e in graph.edges
    ]
    if args.format == "csv":
        print("class_a,class_b,delta,multiplicity")
        for e in edges:
            delta = "NA" if e["delta"] is None else e["delta"]
            print(f"{e['a']},{e['b']},{delta},{e['multiplicity']}")
    else:
        _emit(
            {
                "schema": "aigopt.graph/1",
                "n": graph.n,
                "edge_total": graph.summary.edge_total,
                "exact_edge_total": graph.summary.exact_edge_total,
                "histogram": {str(k): v for k, v in sorted(graph.histogram.items())},
                "max_delta": graph.summary.max_delta,
                "mean_abs_delta": graph.summary.mean_abs_delta,
                "share_delta_le_2": graph.summary.share_delta_le_2,
                "edges": edges,
            }
        )
    _human(
        f"{graph.summary.edge_total} edges, {graph.summary.exact_edge_total} with "
        f"exact endpoints, max |delta| = {graph.summary.max_delta}"
    )
    if graph.summary.exact_edge_total:
        _human(_render_histogram(graph))
    return EXIT_OK


def cmd_verify(args) -> int:
    graph, code = _graph_from_store(args)
    if graph is None:
        return code
    report = verify_bound(graph)
    _emit(
        {
            "schema": "aigopt.verify/1",
            "n": graph.n,
            "holds": report.holds,
            "max_delta": report.max_delta,
            "bound": graph.n,
            "violations": [
                {
                    "a": graph.classes[e.a].canon.hex(),
                    "b": graph.classes[e.b].canon.hex(),
                    "delta": e.delta,
                }
                for e in report.violations
            ],
        }
    )
    if report.holds:
        _human(f"bound holds: max |delta| = {report.max_delta} <= n = {graph.n}")
        return EXIT_OK
    _human(f"BOUND VIOLATED on {len(report.violations)} edges")
    return EXIT_BOUND_VIOLATION


def cmd_repair(args) -> int:
    try:
        circuit = from_aiger(Path(args.input).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        _human(f"error: {exc}")
        return EXIT_USAGE
    table = circuit.evaluate()
    try:
        if args.flip is not None:
            if not 0 <= args.flip < table.rows:
                raise ValueError(f"flip row {args.flip} out of range for n={circuit.n}")
            xstar = Assignment(circuit.n, args.flip)
            if table.eval(xstar) == 0:
                repaired, report = repair_set(circuit, xstar)
            else:
                repaired, report = repair_clear(circuit, xstar)
        else:
            target = parse_hex(args.target, circuit.n)
            repaired, report = repair_multi(circuit, target)
    except ValueError as exc:
        _human(f"error: {exc}")
        return EXIT_USAGE
    out_path = Path(args.output) if args.output else Path(args.input).with_suffix(".repaired.aag")
    out_path.write_text(to_aiger(repaired), encoding="utf-8")
    _emit(
        {
            "schema": "aigopt.repair/1",
            "input": args.input,
            "output": str(out_path),
            "input_size": report.input_size,
            "output_size": report.output_size,
            "flips": report.flips,
            "bound": report.bound,
            "target_tt": report.target_tt.hex(),
        }
    )
    _human(
        f"repaired {args.input}: {report.input_size} -> {report.output_size} gates "
        f"(certified <= {report.bound}), table {report.target_tt.hex()}"
    )
    return EXIT_OK


def cmd_oracle(args) -> int:
    store = _store_path(args)
    if store is None:
        _human("error: oracle mode requires --store or " + STORE_ENV)
        return EXIT_USAGE
    started = time.monotonic()
    oracle = brute_oracle(args.n)
    elapsed_ms = int((time.monotonic() - started) * 1000)
    stamp = datetime.now(timezone.utc).isoformat()
    max_size = 0
    for bits in sorted(oracle):
        entry = oracle[bits]
        tt = TruthTable(args.n, bits)
        record = ResultRecord(
            tt_hex=tt.hex(),
            n=args.n,
            size=entry.size,
            status=Status.EXACT.value,
            exhausted_below=entry.size - 1,
            witness_aag=to_aiger(entry.witness),
            backend=Backend.ORACLE.value,
            elapsed_ms=elapsed_ms,
            timestamp=stamp,
        )
        append_record(store, record)
        max_size = max(max_size, entry.size)
    _emit(
        {
            "schema": "aigopt.oracle/1",
            "n": args.n,
            "functions": len(oracle),
            "max_size": max_size,
            "elapsed_ms": elapsed_ms,
            "store": str(store),
        }
    )
    _human(f"oracle: {len(oracle)} exact records (max size {max_size}) -> {store}")
    return EXIT_OK


def _add_store_flag(p) -> None:
    p.add_argument("--store", default=None, help=f"result store path (or ${STORE_ENV})")


def _add_format_flag(p) -> None:
    p.add_argument(
        "--format", choices=("json", "csv", "table"), default="json",
        help="stdout format (human table always goes to stderr)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aigopt",
        description="Exact AIG sizes, one-bit repair, and mutation-graph bound checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="prove or bound the optimal size of one function")
    p.add_argument("tt", help="truth table in hex, e.g. 0x0180")
    p.add_argument("-n", type=int, required=True, help="variable count")
    p.add_argument("--backend", choices=[b.value for b in (Backend.ENUMERATION, Backend.CNF_EXPORT)],
                   default=Backend.ENUMERATION.value)
    p.add_argument("--budget-secs", type=float, default=None,
                   help="wall-clock budget per (function, gate count) query")
    p.add_argument("--max-gates", type=int, default=16)
    p.add_argument("--campaign", action="store_true",
                   help="iterate all NPN classes of n, resuming from the store")
    p.add_argument("--jobs", type=int, default=1, help="campaign worker processes")
    p.add_argument("--cnf-dir", default="cnf", help="output directory for cnf-export")
    _add_store_flag(p)
    _add_format_flag(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("classify", help="enumerate NPN classes")
    p.add_argument("-n", type=int, required=True)
    _add_format_flag(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("graph", help="build the mutation graph from a store")
    p.add_argument("-n", type=int, required=True)
    _add_store_flag(p)
    _add_format_flag(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("report", help="graph histogram in table form")
    p.add_argument("-n", type=int, required=True)
    _add_store_flag(p)
    _add_format_flag(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("verify", help="check |delta opt| <= n over the graph")
    p.add_argument("-n", type=int, required=True)
    _add_store_flag(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("repair", help="flip rows of a circuit's function")
    p.add_argument("input", help="AIGER (aag) file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--flip", type=int, default=None, help="row index to flip")
    group.add_argument("--target", default=None, help="target truth table hex")
    p.add_argument("-o", "--output", default=None, help="output aag path")
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("oracle", help="exact sizes for every function (n <= 3)")
    p.add_argument("-n", type=int, required=True, choices=(1, 2, 3))
    _add_store_flag(p)
    p.set_defaults(func=cmd_oracle)

    return parser


def cmd_report(args) -> int:
    graph, code = _graph_from_store(args)
    if graph is None:
        return code
    if graph.summary.exact_edge_total == 0:
        _human("no exact-exact edges to report")
        return EXIT_INCOMPLETE_STORE
    table = _render_histogram(graph)
    print(table)
    _human(
        f"mean |delta| = {graph.summary.mean_abs_delta:.2f}, "
        f"share(|delta| <= 2) = {100 * graph.summary.share_delta_le_2:.1f}%"
    )
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
