"""Digit-serial execution of LUT programs over a CAM array.

A p-digit addition lays out each row as p A cells, p B cells and one shared
carry cell (2p + 1 cells total).  The program runs once per digit position,
least significant first, over the slice (A_k, B_k, carry); the carry cell is
reused across digit iterations, which is what makes extended writes that
clobber an already-processed A_k harmless.  All rows advance in parallel.

Every compare emits a per-row mismatch-class census and every scheduled write
emits pulse totals; the cost model consumes the resulting trace.  Write cycles
are scheduled unconditionally, whether or not any row is gated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cam import CamArray
from .mvl import vector_str
from .program import Block, LutProgram, Pass


@dataclass(frozen=True)
class DigitSlice:
    """Array column of each operand position for one digit iteration."""

    columns: tuple[int, ...]

    def map_positions(self, positions) -> tuple[int, ...]:
        return tuple(self.columns[p] for p in positions)


@dataclass(frozen=True)
class CompareEvent:
    digit: int
    label: str
    census: tuple[int, ...]  # rows with 0, 1, 2, ... mismatching cells


@dataclass(frozen=True)
class WriteEvent:
    digit: int
    label: str
    sets: int
    resets: int
    rows_written: int


@dataclass
class ExecutionTrace:
    rows: int
    compares: list = field(default_factory=list)
    writes: list = field(default_factory=list)

    @property
    def compare_count(self) -> int:
        return len(self.compares)

    @property
    def write_count(self) -> int:
        return len(self.writes)

    @property
    def set_total(self) -> int:
        return sum(w.sets for w in self.writes)

    @property
    def reset_total(self) -> int:
        return sum(w.resets for w in self.writes)

    def census_totals(self) -> tuple[int, ...]:
        """Row counts per mismatch class summed over all compares."""
        width = max((len(c.census) for c in self.compares), default=0)
        totals = [0] * width
        for c in self.compares:
            for i, v in enumerate(c.census):
                totals[i] += v
        return tuple(totals)

    def to_records(self) -> dict:
        """Structured event log for export and external tooling."""
        return {
            "rows": self.rows,
            "compares": [
                {"digit": c.digit, "input": c.label, "census": list(c.census)}
                for c in self.compares
            ],
            "writes": [
                {"digit": w.digit, "action": w.label, "sets": w.sets,
                 "resets": w.resets, "rows_written": w.rows_written}
                for w in self.writes
            ],
            "cycles": {"compares": self.compare_count, "writes": self.write_count},
        }


def adder_layout(p: int) -> dict:
    if p < 1:
        raise ValueError("digit count must be >= 1")
    return {
        "a": tuple(range(p)),              # index k holds digit k, LSB first
        "b": tuple(range(p, 2 * p)),
        "carry": 2 * p,
    }


def adder_slice(layout: dict, k: int) -> DigitSlice:
    """Slice for digit k of an (A, B, C) operand triple."""
    return DigitSlice((layout["a"][k], layout["b"][k], layout["carry"]))


def make_adder_array(radix: int, a_digits: np.ndarray, b_digits: np.ndarray) -> CamArray:
    """Array with one row per (a, b) operand pair, digit matrices LSB first."""
    a = np.asarray(a_digits, dtype=np.int16)
    b = np.asarray(b_digits, dtype=np.int16)
    if a.shape != b.shape or a.ndim != 2:
        raise ValueError("operand matrices must share shape (rows, digits)")
    rows, p = a.shape
    digits = np.zeros((rows, 2 * p + 1), dtype=np.int16)
    layout = adder_layout(p)
    digits[:, layout["a"]] = a
    digits[:, layout["b"]] = b
    return CamArray(radix, digits, layout)


def _record_compare(array: CamArray, trace: ExecutionTrace, digit: int,
                    label: str, mismatch_counts: np.ndarray, width: int) -> None:
    census = np.bincount(mismatch_counts, minlength=width + 1)
    trace.compares.append(CompareEvent(digit=digit, label=label,
                                       census=tuple(int(c) for c in census)))


def run_pass(array: CamArray, pas: Pass, slice_: DigitSlice,
             trace: ExecutionTrace, digit: int = 0) -> None:
    """Compare the pass input over the slice, immediately rewrite tagged rows."""
    if len(slice_.columns) != len(pas.input_key):
        raise ValueError("slice width does not match the pass arity")
    label = vector_str(pas.input_key)
    counts = array.compare(slice_.columns, pas.input_key)
    _record_compare(array, trace, digit, label, counts, len(slice_.columns))
    action = array.apply_write(slice_.map_positions(pas.write_mask),
                               pas.write_key, mode="immediate")
    trace.writes.append(WriteEvent(digit=digit, label=pas.write_label,
                                   sets=action.sets, resets=action.resets,
                                   rows_written=int(array.tag.sum())))


def run_block(array: CamArray, block: Block, slice_: DigitSlice,
              trace: ExecutionTrace, digit: int = 0) -> None:
    """Run all member compares, then one deferred write of the shared action."""
    array.clear_block_enable()
    for pas in block.passes:
        if len(slice_.columns) != len(pas.input_key):
            raise ValueError("slice width does not match the pass arity")
        counts = array.compare(slice_.columns, pas.input_key)
        _record_compare(array, trace, digit, vector_str(pas.input_key),
                        counts, len(slice_.columns))
        array.latch_block_enable()
    rows_written = int(array.block_enable.sum())
    action = array.apply_write(slice_.map_positions(block.write_mask),
                               block.write_key, mode="blockEnd")
    trace.writes.append(WriteEvent(digit=digit, label=block.write_label,
                                   sets=action.sets, resets=action.resets,
                                   rows_written=rows_written))


def run_program(array: CamArray, program: LutProgram, slice_: DigitSlice,
                trace: ExecutionTrace, digit: int = 0) -> None:
    """One full program application over a single digit slice."""
    if program.mode == "blocked":
        for block in program.blocks:
            run_block(array, block, slice_, trace, digit)
    else:
        for pas in program.passes:
            run_pass(array, pas, slice_, trace, digit)


def add_vectors(array: CamArray, program: LutProgram, p: int) -> ExecutionTrace:
    """In-place p-digit addition of the A and B operand columns of every row.

    The shared carry cell is reset to 0 first.  Afterwards the B columns hold
    (A + B) mod n**p digit-wise and the carry cell holds the final carry; A
    columns may be clobbered where extended writes fired.
    """
    layout = array.layout or adder_layout(p)
    if array.width != 2 * p + 1:
        raise ValueError(f"array width {array.width} does not fit {p}-digit addition")
    array.digits[:, layout["carry"]] = 0
    trace = ExecutionTrace(rows=array.rows)
    for k in range(p):
        run_program(array, program, adder_slice(layout, k), trace, digit=k)
    return trace


def read_sum(array: CamArray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """(sum digit matrix LSB first, carry column) after an addition run."""
    layout = array.layout or adder_layout(p)
    return (array.digits[:, layout["b"]].copy(),
            array.digits[:, layout["carry"]].copy())


def random_operands(rng: np.random.Generator, rows: int, p: int,
                    n: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform i.i.d. operand digit matrices; A drawn first, then B."""
    a = rng.integers(0, n, size=(rows, p), dtype=np.int16)
    b = rng.integers(0, n, size=(rows, p), dtype=np.int16)
    return a, b
