"""Command-line front end: compile, validate, simulate, bench, export-diagram.

All randomness flows from the --seed flag, so identical invocations produce
byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import blocked, cost, diagram, executor, mvl, nonblocked, oracle, program

# Size sweep used by the bench command: (binary bits, ternary trits) pairs.
BENCH_PAIRS = ((8, 5), (16, 10), (32, 20), (51, 32), (64, 40), (128, 80))
PLOT_ROWS = tuple(2 ** k for k in range(11))
PLOT_REFERENCE_PAIR = (32, 20)  # size point used for the rows sweeps


def _load_function(args) -> mvl.FunctionSpec:
    if args.table:
        with open(args.table, "r", encoding="utf-8") as fh:
            return mvl.load_spec(fh.read())
    if args.function != "adder":
        raise SystemExit(f"unknown builtin function {args.function!r}")
    return mvl.make_adder_spec(args.radix)


def build_program(spec: mvl.FunctionSpec, mode: str,
                  trace_sink: list | None = None):
    """Diagram -> cycle breaking -> chosen compiler."""
    diag = diagram.break_cycles(diagram.build_diagram(spec))
    if mode == "blocked":
        return diag, blocked.compile_blocked(diag, trace_sink=trace_sink)
    return diag, nonblocked.compile_nonblocked(diag)


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_compile(args) -> int:
    spec = _load_function(args)
    trace_sink = [] if args.trace else None
    try:
        diag, prog = build_program(spec, args.mode, trace_sink)
    except diagram.NoValidRedirectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    violations = oracle.validate_lut(spec, prog)
    report = {
        "radix": spec.radix,
        "mode": args.mode,
        "pass_count": prog.pass_count,
        "block_count": prog.block_count if args.mode == "blocked" else None,
        "no_action_count": len(prog.no_action_inputs),
        "cycles_broken": [
            {"source": mvl.vector_str(r.source),
             "new_output": mvl.vector_str(r.new_output),
             "write_dim": r.write_dim}
            for r in diag.redirects
        ],
        "violations": [str(v) for v in violations],
    }
    if args.output:
        _write_text(args.output, prog.to_json())
    if args.report:
        _write_text(args.report, json.dumps(report, indent=2) + "\n")
    if args.trace:
        _write_text(args.trace, json.dumps(trace_sink, indent=2) + "\n")
    if prog.pass_count == 0:
        print("warning: empty program (every input is a noAction state)")
    print(f"passes: {prog.pass_count}  "
          + (f"blocks: {prog.block_count}  " if args.mode == "blocked" else "")
          + f"noAction: {len(prog.no_action_inputs)}  "
          + f"cycle redirects: {len(diag.redirects)}")
    if violations:
        for v in violations:
            print(f"violation: {v}", file=sys.stderr)
        return 1
    return 0


def cmd_validate(args) -> int:
    spec = _load_function(args)
    if args.lut:
        with open(args.lut, "r", encoding="utf-8") as fh:
            prog = program.program_from_json(fh.read())
    else:
        _, prog = build_program(spec, args.mode)
    violations = oracle.validate_lut(spec, prog)
    if violations:
        for v in violations:
            print(f"violation: {v}")
        return 1
    print(f"ok: {prog.pass_count} passes validated")
    return 0


def _simulate_once(spec, prog, a, b):
    array = executor.make_adder_array(spec.radix, a, b)
    trace = executor.add_vectors(array, prog, a.shape[1])
    return array, trace


def cmd_simulate(args) -> int:
    spec = _load_function(args)
    if spec.arity != 3 or spec.write_positions != (1, 2):
        print("error: simulate drives (A, B, carry) addition tables only "
              "(arity 3, write positions 1 2)", file=sys.stderr)
        return 2
    try:
        _, prog = build_program(spec, args.mode)
    except diagram.NoValidRedirectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    violations = oracle.validate_lut(spec, prog)
    if violations:
        for v in violations:
            print(f"violation: {v}", file=sys.stderr)
        return 1
    params = cost.CostParams.from_file(args.params) if args.params else cost.CostParams()
    n, p = spec.radix, args.digits

    if args.exhaustive:
        if n ** (2 * p) > 1_000_000:
            print(f"error: exhaustive sweep would need {n ** (2 * p)} rows; "
                  "use --rows with a seed instead", file=sys.stderr)
            return 2
        pairs = [(av, bv) for av in mvl.all_vectors(n, p) for bv in mvl.all_vectors(n, p)]
        # vectors enumerate MSB first; operand matrices store LSB first
        a = np.array([av[::-1] for av, _ in pairs], dtype=np.int16)
        b = np.array([bv[::-1] for _, bv in pairs], dtype=np.int16)
    else:
        rng = np.random.default_rng(args.seed)
        a, b = executor.random_operands(rng, args.rows, p, n)

    if a.shape[0] == 0:
        print("rows: 0 (empty run)")
        return 0

    array, trace = _simulate_once(spec, prog, a, b)
    sums, carry = executor.read_sum(array, p)

    mismatches = 0
    for i in range(a.shape[0]):
        want_digits, want_carry = oracle.oracle_add(a[i], b[i], n)
        got = tuple(int(d) for d in sums[i])
        if got != want_digits or int(carry[i]) != want_carry:
            mismatches += 1
            if mismatches <= 10:
                print(f"mismatch row {i}: a={list(map(int, a[i]))} b={list(map(int, b[i]))} "
                      f"got {got} carry {int(carry[i])}, "
                      f"want {want_digits} carry {want_carry}", file=sys.stderr)

    report = cost.energy_from_trace(
        trace, params,
        delay_cycles=cost.delay_cycles(prog, p, params),
        normalized_area=cost.normalized_area(n, p, params))
    print(f"rows: {a.shape[0]}  mismatches: {mismatches}")
    print(f"avg sets/addition: {report.avg_sets:.4f}  "
          f"avg resets/addition: {report.avg_resets:.4f}")
    print(f"write energy/addition: {report.avg_write_energy:.4f} nJ  "
          f"total energy/addition: {report.avg_total_energy:.4f} nJ")
    print(f"delay: {report.delay_cycles} cycles  area: {report.normalized_area:g}x")
    if args.csv:
        label = f"{p}{'t' if n == 3 else 'b' if n == 2 else 'd'}"
        _write_text(args.csv, _report_csv([(label, n, p, report)]))
    if args.trace_out:
        _write_text(args.trace_out, json.dumps(trace.to_records(), indent=2) + "\n")
    if args.report:
        _write_text(args.report, json.dumps(report.to_record(), indent=2) + "\n")
    return 1 if mismatches else 0


def _report_csv(rows) -> str:
    lines = ["label,radix,digits,avg_sets,avg_resets,write_energy_nj,"
             "compare_energy_nj,total_energy_nj,normalized_area"]
    for label, n, p, rep in rows:
        lines.append(
            f"{label},{n},{p},{rep.avg_sets:.6f},{rep.avg_resets:.6f},"
            f"{rep.avg_write_energy:.6f},{rep.avg_compare_energy:.6f},"
            f"{rep.avg_total_energy:.6f},{rep.normalized_area:g}")
    return "\n".join(lines) + "\n"


def run_size_point(radix: int, digits: int, rows: int, seed: int,
                   params: cost.CostParams, prog=None) -> cost.CostReport:
    """One seeded Monte Carlo energy measurement at a given operand size."""
    if prog is None:
        spec = mvl.make_adder_spec(radix)
        _, prog = build_program(spec, "nonblocked")
    rng = np.random.default_rng(seed)
    a, b = executor.random_operands(rng, rows, digits, radix)
    array = executor.make_adder_array(radix, a, b)
    trace = executor.add_vectors(array, prog, digits)
    return cost.energy_from_trace(
        trace, params,
        delay_cycles=cost.delay_cycles(prog, digits, params),
        normalized_area=cost.normalized_area(radix, digits, params))


def cmd_bench(args) -> int:
    params = cost.CostParams.from_file(args.params) if args.params else cost.CostParams()
    if args.baselines:
        with open(args.baselines, "r", encoding="utf-8") as fh:
            baselines = json.load(fh)
    else:
        baselines = params.baselines
    os.makedirs(args.out_dir, exist_ok=True)

    spec2 = mvl.make_adder_spec(2)
    spec3 = mvl.make_adder_spec(3)
    _, prog2 = build_program(spec2, "nonblocked")
    _, prog3 = build_program(spec3, "nonblocked")
    _, prog3b = build_program(spec3, "blocked")

    table_rows = []
    binary_reports, ternary_reports = [], []
    for q, p in BENCH_PAIRS:
        rb = run_size_point(2, q, args.rows, args.seed, params, prog2)
        rt = run_size_point(3, p, args.rows, args.seed, params, prog3)
        binary_reports.append(rb)
        ternary_reports.append(rt)
        table_rows.append((f"{q}b", 2, q, rb))
        table_rows.append((f"{p}t", 3, p, rt))
    _write_text(os.path.join(args.out_dir, "energy_area.csv"), _report_csv(table_rows))

    delay_lines = ["pair,bits,trits,binary_cycles,ternary_nonblocked_cycles,"
                   "ternary_blocked_cycles,blocked_speedup,ternary_blocked_vs_binary"]
    for q, p in BENCH_PAIRS:
        dq = cost.delay_cycles(prog2, q, params)
        dnb = cost.delay_cycles(prog3, p, params)
        db = cost.delay_cycles(prog3b, p, params)
        delay_lines.append(f"{q}b/{p}t,{q},{p},{dq},{dnb},{db},"
                           f"{dnb / db:.4f},{db / dq:.4f}")
    _write_text(os.path.join(args.out_dir, "delay.csv"),
                "\n".join(delay_lines) + "\n")

    summary = cost.comparison_summary(binary_reports, ternary_reports)
    _write_text(os.path.join(args.out_dir, "summary.csv"),
                "pairs,sets_reduction_pct,energy_reduction_pct,area_reduction_pct\n"
                f"{summary.pairs},{summary.sets_reduction_pct:.4f},"
                f"{summary.energy_reduction_pct:.4f},{summary.area_reduction_pct:.4f}\n")

    _write_plot_data(args.out_dir, params, prog2, prog3, prog3b,
                     binary_reports, ternary_reports, baselines)
    print(f"bench written to {args.out_dir}")
    print(f"mean reductions: sets {summary.sets_reduction_pct:.2f}%  "
          f"energy {summary.energy_reduction_pct:.2f}%  "
          f"area {summary.area_reduction_pct:.2f}%")
    return 0


def _write_plot_data(out_dir, params, prog2, prog3, prog3b,
                     binary_reports, ternary_reports, baselines) -> None:
    """Rows sweeps at the reference size for external plotting (x y lines)."""
    q_ref, p_ref = PLOT_REFERENCE_PAIR
    ref_index = list(BENCH_PAIRS).index(PLOT_REFERENCE_PAIR)
    series = {
        "binary_ap": (cost.delay_cycles(prog2, q_ref, params),
                      binary_reports[ref_index].avg_total_energy),
        "tap_nonblocked": (cost.delay_cycles(prog3, p_ref, params),
                           ternary_reports[ref_index].avg_total_energy),
        "tap_blocked": (cost.delay_cycles(prog3b, p_ref, params),
                        ternary_reports[ref_index].avg_total_energy),
    }
    plot_dir = os.path.join(out_dir, "plotdata")
    os.makedirs(plot_dir, exist_ok=True)
    for name, (delay, energy_per_add) in series.items():
        # AP delay is row-count independent; energy scales with parallel adds
        _write_text(os.path.join(plot_dir, f"delay_vs_rows_{name}.dat"),
                    "".join(f"{r} {delay}\n" for r in PLOT_ROWS))
        _write_text(os.path.join(plot_dir, f"energy_vs_rows_{name}.dat"),
                    "".join(f"{r} {energy_per_add * r:.6f}\n" for r in PLOT_ROWS))
    if baselines:
        ratio_lines = ["name,delay_cycles_per_add,energy_nj_per_add,"
                       "tap_blocked_delay_ratio_at_512,tap_energy_ratio"]
        tap_delay = series["tap_blocked"][0]
        tap_energy = series["tap_blocked"][1]
        for name in sorted(baselines):
            spec = baselines[name]
            d = float(spec["delay_cycles"])
            e = float(spec["energy_nj"])
            _write_text(os.path.join(plot_dir, f"delay_vs_rows_{name}.dat"),
                        "".join(f"{r} {d * r:g}\n" for r in PLOT_ROWS))
            _write_text(os.path.join(plot_dir, f"energy_vs_rows_{name}.dat"),
                        "".join(f"{r} {e * r:.6f}\n" for r in PLOT_ROWS))
            ratio_lines.append(f"{name},{d:g},{e:g},"
                               f"{(d * 512) / tap_delay:.4f},{e / tap_energy:.4f}")
        _write_text(os.path.join(out_dir, "baseline_ratios.csv"),
                    "\n".join(ratio_lines) + "\n")


def cmd_export_diagram(args) -> int:
    spec = _load_function(args)
    diag = diagram.build_diagram(spec)
    if not args.raw:
        diag = diagram.break_cycles(diag)
    doc = diagram.export_diagram(diag)
    text = json.dumps(doc, indent=2) + "\n"
    if args.output:
        _write_text(args.output, text)
    else:
        print(text, end="")
    return 0


def _add_function_args(sub):
    sub.add_argument("--radix", type=int, default=3)
    sub.add_argument("--function", default="adder",
                     help="builtin function name (default: adder)")
    sub.add_argument("--table", help="truth-table document overriding --function")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mvap",
        description="Multi-valued associative processor LUT compiler and simulator")
    subs = parser.add_subparsers(dest="command", required=True)

    c = subs.add_parser("compile", help="generate and validate a LUT schedule")
    _add_function_args(c)
    c.add_argument("--mode", choices=("nonblocked", "blocked"), default="nonblocked")
    c.add_argument("-o", "--output", help="LUT document destination (JSON)")
    c.add_argument("--report", help="compilation report destination (JSON)")
    c.add_argument("--trace", help="grpLvl trace destination (JSON, blocked mode)")
    c.set_defaults(func=cmd_compile)

    v = subs.add_parser("validate", help="validate a LUT against its truth table")
    _add_function_args(v)
    v.add_argument("--mode", choices=("nonblocked", "blocked"), default="nonblocked")
    v.add_argument("--lut", help="LUT document to validate (default: compile fresh)")
    v.set_defaults(func=cmd_validate)

    s = subs.add_parser("simulate", help="run parallel additions and cross-check")
    _add_function_args(s)
    s.add_argument("--mode", choices=("nonblocked", "blocked"), default="nonblocked")
    s.add_argument("--digits", type=int, default=20)
    s.add_argument("--rows", type=int, default=10000)
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--exhaustive", action="store_true",
                   help="run every operand pair instead of --rows random ones")
    s.add_argument("--params", help="cost parameter file (JSON)")
    s.add_argument("--csv", help="cost report CSV destination")
    s.add_argument("--report", help="cost report record destination (JSON)")
    s.add_argument("--trace-out", help="execution event log destination (JSON)")
    s.set_defaults(func=cmd_simulate)

    b = subs.add_parser("bench", help="reproduce the energy/area/delay tables")
    b.add_argument("--rows", type=int, default=10000)
    b.add_argument("--seed", type=int, default=7)
    b.add_argument("--out-dir", default="bench_out")
    b.add_argument("--params", help="cost parameter file (JSON)")
    b.add_argument("--baselines", help="external adder constants (JSON)")
    b.set_defaults(func=cmd_bench)

    e = subs.add_parser("export-diagram", help="dump the state diagram as JSON")
    _add_function_args(e)
    e.add_argument("--raw", action="store_true",
                   help="export before cycle breaking")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_export_diagram)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
