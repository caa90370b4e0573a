"""Functional model of the MvCAM array.

Cells store digits (don't care included); a compare discharges a row's match
line through every cell whose driven-high signal meets a low-resistance
memristor, so a row tags iff no compared cell mismatches.  Writes overwrite
masked columns of gated rows and report how many memristor set/reset pulses
actually fired: one of each per changed digit, a single set (reset) when the
old (new) value is don't care.

Row storage is a numpy digit matrix so that compares and writes across all
rows vectorize; per-row views are available for cell-level inspection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mvl import (DONT_CARE, CellState, SignalVector, check_digit, check_radix,
                  decode_signals, digit_char, encode_digit, parse_digit)


@dataclass(frozen=True)
class WriteAction:
    """Set/reset pulse counts for one cell write."""

    sets: int
    resets: int


def write_action(current: int, nxt: int, n: int) -> WriteAction:
    """Pulses needed to move a cell from digit `current` to digit `nxt`."""
    check_digit(current, n)
    check_digit(nxt, n)
    if current == nxt:
        return WriteAction(0, 0)
    if current == DONT_CARE:
        return WriteAction(1, 0)
    if nxt == DONT_CARE:
        return WriteAction(0, 1)
    return WriteAction(1, 1)


def cell_match(cell: CellState, sig: SignalVector) -> tuple[bool, int]:
    """Match outcome and discharge-path count for one cell.

    A discharge path exists at index i when S_i is driven high and M_i is in
    the low-resistance state; the cell matches iff there is no such path.
    """
    if cell.radix != sig.radix:
        raise ValueError("cell and signal vector radix differ")
    low_paths = sum(1 for hi, m in zip(sig.levels, cell.memristors)
                    if hi and m == "L")
    return low_paths == 0, low_paths


class CamArray:
    """R rows of N digit cells with per-row tag and block-enable latches."""

    def __init__(self, radix: int, digits: np.ndarray, layout: dict | None = None):
        check_radix(radix)
        digits = np.asarray(digits, dtype=np.int16)
        if digits.ndim != 2:
            raise ValueError("digit matrix must be 2-D (rows x cells)")
        if digits.size and not np.all((digits == DONT_CARE)
                                      | ((digits >= 0) & (digits < radix))):
            raise ValueError(f"digit matrix holds values invalid for radix {radix}")
        self.radix = radix
        self.digits = digits
        self.layout = layout or {}
        self.tag = np.zeros(self.rows, dtype=bool)
        self.block_enable = np.zeros(self.rows, dtype=bool)

    @property
    def rows(self) -> int:
        return self.digits.shape[0]

    @property
    def width(self) -> int:
        return self.digits.shape[1]

    @classmethod
    def filled(cls, radix: int, rows: int, width: int, fill: int = 0,
               layout: dict | None = None) -> "CamArray":
        return cls(radix, np.full((rows, width), fill, dtype=np.int16), layout)

    def row(self, i: int) -> "CamRow":
        cells = tuple(encode_digit(int(d), self.radix) for d in self.digits[i])
        return CamRow(cells=cells, tag=bool(self.tag[i]),
                      block_enable=bool(self.block_enable[i]))

    def compare(self, columns, key_digits) -> np.ndarray:
        """Compare the given columns against key digits on every row.

        Unlisted columns are masked.  Tags latch the outcome; the per-row
        mismatching-cell counts are returned (0 is a full match).
        """
        columns = tuple(columns)
        key = np.asarray(key_digits, dtype=np.int16)
        if key.shape != (len(columns),):
            raise ValueError("one key digit per compared column required")
        stored = self.digits[:, columns]
        mismatch = (stored != key) & (stored != DONT_CARE) & (key != DONT_CARE)
        counts = mismatch.sum(axis=1)
        self.tag = counts == 0
        return counts

    def apply_write(self, columns, key_digits, mode: str = "immediate") -> WriteAction:
        """Overwrite masked columns of the gated rows; returns pulse totals.

        "immediate" gates on the tag latch, "blockEnd" on the block-enable
        flip-flops and clears them afterwards.  Only actual digit transitions
        cost pulses.
        """
        columns = tuple(columns)
        key = np.asarray(key_digits, dtype=np.int16)
        if key.shape != (len(columns),):
            raise ValueError("write mask and write key widths differ")
        if mode == "immediate":
            gate = self.tag
        elif mode == "blockEnd":
            gate = self.block_enable
        else:
            raise ValueError(f"unknown write mode {mode!r}")
        sets = resets = 0
        if gate.any():
            current = self.digits[np.ix_(gate, columns)]
            changed = current != key
            sets = int(np.count_nonzero(changed & (key != DONT_CARE)))
            resets = int(np.count_nonzero(changed & (current != DONT_CARE)))
            self.digits[np.ix_(gate, columns)] = np.broadcast_to(key, current.shape)
        if mode == "blockEnd":
            self.block_enable[:] = False
        return WriteAction(sets, resets)

    def latch_block_enable(self) -> None:
        """OR the freshly latched tags into the per-row block-enable flip-flops."""
        self.block_enable |= self.tag

    def clear_block_enable(self) -> None:
        self.block_enable[:] = False

    def snapshot(self) -> str:
        """One base-n string per row, 'x' for don't-care cells, column 0 first."""
        return "\n".join("".join(digit_char(int(d)) for d in row)
                         for row in self.digits) + "\n"


@dataclass(frozen=True)
class CamRow:
    """Cell-level view of one array row."""

    cells: tuple[CellState, ...]
    tag: bool
    block_enable: bool


def row_compare(row: CamRow, keys) -> tuple[bool, int]:
    """Cell-by-cell row compare against per-column key-mask pairs.

    The row tags when every unmasked cell matches; the mismatching-cell count
    drives the fm/1mm/2mm/... energy classes.
    """
    keys = tuple(keys)
    if len(keys) != len(row.cells):
        raise ValueError("one key-mask pair per cell required")
    mismatches = 0
    for cell, km in zip(row.cells, keys):
        ok, _ = cell_match(cell, decode_signals(km, cell.radix))
        if not ok:
            mismatches += 1
    return mismatches == 0, mismatches


def array_from_snapshot(radix: int, text: str, layout: dict | None = None) -> CamArray:
    rows = [line.strip() for line in text.splitlines() if line.strip()]
    if not rows:
        return CamArray(radix, np.zeros((0, 0), dtype=np.int16), layout)
    width = len(rows[0])
    matrix = np.empty((len(rows), width), dtype=np.int16)
    for i, line in enumerate(rows):
        if len(line) != width:
            raise ValueError(f"snapshot row {i} width {len(line)} != {width}")
        matrix[i] = [parse_digit(ch, radix) for ch in line]
    return CamArray(radix, matrix, layout)
