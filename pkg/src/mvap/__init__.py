"""Multi-valued associative processor simulator and LUT schedule compiler."""

from .blocked import GrpLvlTable, compile_blocked, emit_block, group_offset, init_grp_lvl, select_next_group
from .cam import CamArray, CamRow, WriteAction, array_from_snapshot, cell_match, row_compare, write_action
from .cost import (ComparisonSummary, CostParams, CostReport, comparison_summary,
                   delay_cycles, energy_from_trace, normalized_area)
from .diagram import (CyclicDiagramError, NoValidRedirectError, StateDiagram, StateNode,
                      break_cycles, build_diagram, compute_out_vals, export_diagram)
from .executor import (CompareEvent, DigitSlice, ExecutionTrace, WriteEvent, add_vectors,
                       adder_layout, adder_slice, make_adder_array, random_operands,
                       read_sum, run_block, run_pass, run_program)
from .mvl import (DONT_CARE, CellState, FunctionSpec, KeyMask, SignalVector,
                  SpecFormatError, decode_gate_level, decode_signals, encode_digit,
                  load_spec, make_adder_spec, save_spec, ternary_inverters)
from .nonblocked import compile_nonblocked
from .oracle import Violation, oracle_add, random_inplace_spec, validate_lut
from .program import Block, LutProgram, Pass, program_from_json

__all__ = [name for name in dir() if not name.startswith("_")]
