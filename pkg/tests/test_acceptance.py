"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -rA` to see every line.
"""

import time
from collections import Counter

import numpy as np

from mvap.blocked import compile_blocked, init_grp_lvl, select_next_group
from mvap.cam import CamArray, cell_match
from mvap.cli import BENCH_PAIRS, build_program, run_size_point
from mvap.cost import CostParams, comparison_summary, delay_cycles, normalized_area
from mvap.diagram import NoValidRedirectError, break_cycles, build_diagram
from mvap.executor import (DigitSlice, ExecutionTrace, add_vectors, make_adder_array,
                           random_operands, read_sum, run_program)
from mvap.mvl import KeyMask, decode_gate_level, decode_signals, encode_digit, \
    make_adder_spec
from mvap.nonblocked import compile_nonblocked
from mvap.oracle import DOMINO_REWRITE, oracle_add, random_inplace_spec, validate_lut
from mvap.program import LutProgram

from test_cam import TERNARY_MATCH_TABLE

SEED = 7
ROWS = 10_000

# Per-addition averages reported for the 10,000-addition sweep:
# label -> (radix, digits, avg sets = avg resets, write energy nJ).
REFERENCE_SWEEP = {
    "8b": (2, 8, 5.99, 11.99), "5t": (3, 5, 5.22, 10.44),
    "16b": (2, 16, 11.99, 23.99), "10t": (3, 10, 10.53, 21.06),
    "32b": (2, 32, 24.04, 48.07), "20t": (3, 20, 21.02, 42.04),
    "51b": (2, 51, 38.24, 76.48), "32t": (3, 32, 33.67, 67.35),
    "64b": (2, 64, 47.98, 95.96), "40t": (3, 40, 42.17, 84.33),
    "128b": (2, 128, 95.98, 192.0), "80t": (3, 80, 84.54, 169.1),
}

TFA_GRPLVL = {
    1: {5: 1, 7: 1, 8: 2, 10: 2, 11: 1, 19: 1},
    2: {5: 5, 6: 1, 8: 1, 10: 1},
    3: {8: 2, 10: 1},
    4: {7: 1, 11: 1},
}

TFA_BLOCK_MULTISET = Counter([
    ("W020", 1), ("W01", 4), ("W11", 4), ("W20", 4), ("W21", 2),
    ("W10", 2), ("W02", 1), ("W01", 2), ("W11", 1),
])


def report(num, text):
    print(f"ACCEPTANCE {num}: PASS - {text}")


def ternary_programs():
    diagram = break_cycles(build_diagram(make_adder_spec(3)))
    return compile_nonblocked(diagram), compile_blocked(diagram)


def test_criterion_1_exhaustive_single_digit():
    start = time.monotonic()
    rows = [[a, b, c] for a in range(3) for b in range(3) for c in range(3)]
    for prog in ternary_programs():
        array = CamArray(3, np.array(rows, dtype=np.int16))
        run_program(array, prog, DigitSlice((0, 1, 2)), ExecutionTrace(rows=27))
        for (a, b, c), got in zip(rows, array.digits):
            s = a + b + c
            assert (got[1], got[2]) == (s % 3, s // 3), (a, b, c)
            assert got[0] == (0 if (a, b, c) == (1, 0, 1) else a), (a, b, c)
    elapsed = time.monotonic() - start
    assert elapsed < 1.0
    report(1, f"all 27 single-digit inputs correct in both modes ({elapsed:.3f} s)")


def test_criterion_2_binary_lut_and_domino():
    spec = make_adder_spec(2)
    prog = compile_nonblocked(break_cycles(build_diagram(spec)))
    assert prog.pass_count == 4
    assert len(prog.no_action_inputs) == 4
    assert validate_lut(spec, prog) == []
    swapped = LutProgram(radix=2, arity=3, write_positions=(1, 2),
                         mode="nonblocked",
                         passes=(prog.passes[1], prog.passes[0]) + prog.passes[2:],
                         no_action_inputs=prog.no_action_inputs)
    dominos = [v for v in validate_lut(spec, swapped) if v.kind == DOMINO_REWRITE]
    assert len(dominos) == 1
    assert dominos[0].initial == (1, 0, 0)
    assert dominos[0].trajectory == ((1, 0, 0), (1, 1, 0), (1, 0, 1))
    report(2, "binary LUT is 4 passes + 4 noAction; swapped passes domino 100->110->101")


def test_criterion_3_ternary_lut_cardinality():
    nb, bl = ternary_programs()
    assert nb.pass_count == 21
    assert len(nb.no_action_inputs) == 6
    assert bl.block_count == 9
    assert bl.pass_count == 21
    multiset = Counter((b.write_label, len(b.passes)) for b in bl.blocks)
    assert multiset == TFA_BLOCK_MULTISET
    report(3, "ternary LUT: 21 passes / 6 noAction; 9 blocks with the expected "
              "write-action multiset")


def test_criterion_4_grplvl_fidelity():
    table = init_grp_lvl(break_cycles(build_diagram(make_adder_spec(3))))
    assert table.snapshot() == TFA_GRPLVL
    assert table.work.node((1, 0, 1)).grp_num == 19
    assert table.get(2, 5) == 5
    g, split = select_next_group(table)
    assert (g, split) == (19, False)
    report(4, "initial grpLvl census matches the expected table; group 19 first")


def test_criterion_5_reference_sweep_statistics():
    start = time.monotonic()
    params = CostParams()
    _, prog2 = build_program(make_adder_spec(2), "nonblocked")
    _, prog3 = build_program(make_adder_spec(3), "nonblocked")
    worst = 0.0
    for label, (n, digits, want_sets, want_write) in REFERENCE_SWEEP.items():
        rep = run_size_point(n, digits, ROWS, SEED, params,
                             prog2 if n == 2 else prog3)
        err = abs(rep.avg_sets - want_sets) / want_sets
        assert err <= 0.02, f"{label}: avg sets {rep.avg_sets:.4f} vs {want_sets}"
        assert rep.avg_write_energy == rep.avg_sets * 2.0  # sets == resets at 1 nJ
        werr = abs(rep.avg_write_energy - want_write) / want_write
        assert werr <= 0.02, f"{label}: write energy {rep.avg_write_energy:.4f}"
        worst = max(worst, err, werr)
    elapsed = time.monotonic() - start
    assert elapsed < 30.0
    report(5, f"12 size points within 2% (worst {100 * worst:.2f}%) "
              f"in {elapsed:.1f} s at seed {SEED}")


def test_criterion_6_aggregate_deltas():
    params = CostParams()
    _, prog2 = build_program(make_adder_spec(2), "nonblocked")
    _, prog3 = build_program(make_adder_spec(3), "nonblocked")
    binary, ternary = [], []
    for q, p in BENCH_PAIRS:
        rb = run_size_point(2, q, ROWS, SEED, params, prog2)
        rt = run_size_point(3, p, ROWS, SEED, params, prog3)
        rb.normalized_area = normalized_area(2, q, params)
        rt.normalized_area = normalized_area(3, p, params)
        binary.append(rb)
        ternary.append(rt)
    summary = comparison_summary(binary, ternary)
    assert abs(summary.sets_reduction_pct - 12.6) <= 1.0
    assert abs(summary.energy_reduction_pct - 12.25) <= 1.0
    assert round(summary.area_reduction_pct, 1) == 6.2  # closed-form model
    report(6, f"mean reductions: sets {summary.sets_reduction_pct:.2f}%, "
              f"energy {summary.energy_reduction_pct:.2f}%, "
              f"area {summary.area_reduction_pct:.4f}% (rounds to 6.2%)")


def test_criterion_7_delay_ratios():
    nb, bl = ternary_programs()
    _, prog2 = build_program(make_adder_spec(2), "nonblocked")
    per_trit_nb = delay_cycles(nb, 1)
    per_trit_bl = delay_cycles(bl, 1)
    assert (per_trit_nb, per_trit_bl) == (42, 30)
    assert per_trit_nb / per_trit_bl == 1.40
    binary_32 = delay_cycles(prog2, 32)
    ternary_20 = delay_cycles(bl, 20)
    assert (binary_32, ternary_20) == (256, 600)
    assert 2.3 <= ternary_20 / binary_32 <= 2.4
    report(7, "per-trit 42 vs 30 cycles (1.40x); 32b 256 vs 20t blocked 600 "
              f"({ternary_20 / binary_32:.4f}x)")


def test_criterion_8_decoder_and_match_tables():
    for active in (True, False):
        for key in range(3):
            km = KeyMask(key, active=active)
            assert decode_gate_level(km) == decode_signals(km, 3)
    for active, key, stored, expect in TERNARY_MATCH_TABLE:
        sig = decode_signals(KeyMask(max(key, 0), active=active), 3)
        match, _ = cell_match(encode_digit(stored, 3), sig)
        assert match is expect
    report(8, "gate-level decoder equals functional decoding on all 6 key-mask "
              "pairs; all 13 match-table rows reproduced")


def test_criterion_9_property_suite():
    rng = np.random.default_rng(2024)
    shapes = [(1, 2), (0, 1), (2,)]
    compiled = refused = 0
    for i in range(100):
        spec = random_inplace_spec(3, 3, shapes[i % len(shapes)], rng)
        try:
            diagram = break_cycles(build_diagram(spec))
        except NoValidRedirectError:
            refused += 1
            continue
        for prog in (compile_nonblocked(diagram), compile_blocked(diagram)):
            assert validate_lut(spec, prog) == []
        compiled += 1
    assert compiled + refused == 100
    assert compiled > 0

    _, prog3 = build_program(make_adder_spec(3), "nonblocked")
    rng = np.random.default_rng(SEED)
    a, b = random_operands(rng, ROWS, 20, 3)
    array = make_adder_array(3, a, b)
    add_vectors(array, prog3, 20)
    sums, carry = read_sum(array, 20)
    for i in range(ROWS):
        want_digits, want_carry = oracle_add(a[i], b[i], 3)
        assert tuple(int(d) for d in sums[i]) == want_digits, f"row {i}"
        assert int(carry[i]) == want_carry, f"row {i}"
    report(9, f"{compiled} random specs compiled and validated, {refused} "
              f"correctly refused; 20-trit x {ROWS} rows match the oracle exactly")
