"""Independent reference arithmetic and whole-program LUT validation.

Everything here deliberately avoids the CAM model and the compilers' data
structures: programs are replayed as plain digit-vector rewrites so the
executor and the schedules can be checked against something that shares no
code with them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mvl import FunctionSpec, all_vectors, vector_str
from .program import LutProgram

WRONG_FINAL_STATE = "wrongFinalState"
DOMINO_REWRITE = "dominoRewrite"
ORDERING_BREACH = "orderingBreach"


@dataclass(frozen=True)
class Violation:
    kind: str
    initial: tuple[int, ...]
    trajectory: tuple[tuple[int, ...], ...]
    expected: tuple[int, ...] | None
    detail: str

    def __str__(self):
        path = " -> ".join(vector_str(v) for v in self.trajectory)
        want = vector_str(self.expected) if self.expected else "-"
        return (f"{self.kind}: initial {vector_str(self.initial)}, "
                f"trajectory {path}, expected {want} ({self.detail})")


def oracle_add(a, b, n: int) -> tuple[tuple[int, ...], int]:
    """Grade-school base-n addition, digits LSB first; returns (digits, carry)."""
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        raise ValueError("operands must have equal digit counts")
    out = []
    carry = 0
    for da, db in zip(a, b):
        s = da + db + carry
        out.append(s % n)
        carry = s // n
    return tuple(out), carry


def _apply(vec, mask, key):
    out = list(vec)
    for p, d in zip(mask, key):
        out[p] = d
    return tuple(out)


def validate_lut(spec: FunctionSpec, program: LutProgram) -> list:
    """Replay the program on every initial vector; return all violations.

    A valid program leaves each noAction input alone, rewrites every other
    input exactly once, lands it on an output whose written digits match the
    table, and never lets an earlier write feed a later compare (checked both
    statically across blocks and by the replay itself).
    """
    violations = []
    blocks = list(program.iter_blocks())
    pass_of = {}
    for b in blocks:
        for p in b.passes:
            if p.input_key in pass_of:
                raise ValueError(f"duplicate pass input {vector_str(p.input_key)}")
            pass_of[p.input_key] = (b, p)

    # Static rule: an earlier block's effective output must never equal a
    # later block's compare input, otherwise the rewritten row re-matches.
    for i, bi in enumerate(blocks):
        outs = {_apply(p.input_key, bi.write_mask, bi.write_key): p for p in bi.passes}
        for bj in blocks[i + 1:]:
            for q in bj.passes:
                if q.input_key in outs:
                    p = outs[q.input_key]
                    violations.append(Violation(
                        kind=ORDERING_BREACH,
                        initial=p.input_key,
                        trajectory=(p.input_key, q.input_key),
                        expected=None,
                        detail=f"pass {p.pass_num} output is re-tested by pass {q.pass_num}",
                    ))

    for initial in all_vectors(spec.radix, spec.arity):
        entry = pass_of.get(initial)
        if entry is None:
            expected = initial
            if spec.write_digits(spec.outputs[initial]) != spec.write_digits(initial):
                violations.append(Violation(
                    kind=WRONG_FINAL_STATE, initial=initial, trajectory=(initial,),
                    expected=spec.outputs[initial],
                    detail="input needs a write but has no pass"))
                continue
        else:
            block, pas = entry
            expected = _apply(initial, block.write_mask, block.write_key)
            if spec.write_digits(expected) != spec.write_digits(spec.outputs[initial]):
                violations.append(Violation(
                    kind=WRONG_FINAL_STATE, initial=initial,
                    trajectory=(initial, expected), expected=spec.outputs[initial],
                    detail="pass writes digits that disagree with the table"))
                continue

        state = initial
        trajectory = [initial]
        rewrites = 0
        for block in blocks:
            matched = [p for p in block.passes if p.input_key == state]
            if matched:
                state = _apply(state, block.write_mask, block.write_key)
                trajectory.append(state)
                rewrites += 1
        if rewrites > 1:
            violations.append(Violation(
                kind=DOMINO_REWRITE, initial=initial, trajectory=tuple(trajectory),
                expected=expected,
                detail=f"rewritten {rewrites} times"))
        elif state != expected:
            violations.append(Violation(
                kind=WRONG_FINAL_STATE, initial=initial, trajectory=tuple(trajectory),
                expected=expected,
                detail="replay does not end on the scheduled output"))
    return violations


def random_inplace_spec(n: int, m: int, write_positions,
                        rng: np.random.Generator) -> FunctionSpec:
    """Uniform random in-place truth table: written digits drawn i.i.d."""
    write_positions = tuple(write_positions)
    outputs = {}
    for vin in all_vectors(n, m):
        vout = list(vin)
        for p in write_positions:
            vout[p] = int(rng.integers(0, n))
        outputs[vin] = tuple(vout)
    return FunctionSpec(radix=n, arity=m, outputs=outputs,
                        write_positions=write_positions)
