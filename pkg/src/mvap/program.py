"""Ordered compare/write schedules: the compilers' output, the executor's input.

A pass is one full-operand compare key plus one write action (key digits over
a write mask of positions).  The blocked form partitions passes into blocks
that share a single deferred write.  Programs serialize to a JSON document so
they can be stored, diffed and executed independently of the compiler.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .mvl import DONT_CARE, parse_vector, vector_str


@dataclass(frozen=True)
class Pass:
    """One LUT entry.  block_id stays None in non-blocked programs."""

    pass_num: int
    input_key: tuple[int, ...]
    output: tuple[int, ...]
    write_mask: tuple[int, ...]
    write_key: tuple[int, ...]
    block_id: int | None = None

    def __post_init__(self):
        if len(self.write_key) != len(self.write_mask):
            raise ValueError("write key width must match write mask width")
        if DONT_CARE in self.input_key:
            raise ValueError("pass input keys are full-operand compares")

    @property
    def write_label(self) -> str:
        return "W" + vector_str(self.write_key)


@dataclass(frozen=True)
class Block:
    """Passes sharing one deferred write action."""

    block_id: int
    write_mask: tuple[int, ...]
    write_key: tuple[int, ...]
    passes: tuple[Pass, ...]

    def __post_init__(self):
        for p in self.passes:
            if p.write_mask != self.write_mask or p.write_key != self.write_key:
                raise ValueError(f"pass {p.pass_num} does not share the block write action")
        inputs = [p.input_key for p in self.passes]
        if len(set(inputs)) != len(inputs):
            raise ValueError("block member inputs must be pairwise distinct")

    @property
    def write_label(self) -> str:
        return "W" + vector_str(self.write_key)


@dataclass(frozen=True)
class LutProgram:
    radix: int
    arity: int
    write_positions: tuple[int, ...]
    mode: str  # "nonblocked" | "blocked"
    passes: tuple[Pass, ...]
    no_action_inputs: tuple[tuple[int, ...], ...]
    blocks: tuple[Block, ...] = field(default=())

    def __post_init__(self):
        if self.mode not in ("nonblocked", "blocked"):
            raise ValueError(f"unknown program mode {self.mode!r}")
        inputs = [p.input_key for p in self.passes]
        if len(set(inputs)) != len(inputs):
            raise ValueError("pass inputs must be pairwise distinct")
        if self.mode == "blocked":
            covered = [p.pass_num for b in self.blocks for p in b.passes]
            if sorted(covered) != [p.pass_num for p in self.passes]:
                raise ValueError("blocks must partition the passes")

    @property
    def pass_count(self) -> int:
        return len(self.passes)

    @property
    def block_count(self) -> int:
        return len(self.blocks) if self.mode == "blocked" else len(self.passes)

    def iter_blocks(self):
        """Blocks in schedule order; singleton blocks in non-blocked mode."""
        if self.mode == "blocked":
            return iter(self.blocks)
        return (Block(block_id=p.pass_num, write_mask=p.write_mask,
                      write_key=p.write_key, passes=(p,))
                for p in self.passes)

    def to_json(self) -> str:
        doc = {
            "radix": self.radix,
            "arity": self.arity,
            "write_positions": list(self.write_positions),
            "mode": self.mode,
            "passes": [
                {
                    "pass_num": p.pass_num,
                    "input": vector_str(p.input_key),
                    "output": vector_str(p.output),
                    "write_mask": list(p.write_mask),
                    "write_key": vector_str(p.write_key),
                    "block_id": p.block_id,
                }
                for p in self.passes
            ],
            "no_action": [vector_str(v) for v in self.no_action_inputs],
        }
        return json.dumps(doc, indent=2) + "\n"


def program_from_json(text: str) -> LutProgram:
    doc = json.loads(text)
    n = doc["radix"]
    passes = tuple(
        Pass(
            pass_num=p["pass_num"],
            input_key=parse_vector(p["input"], n),
            output=parse_vector(p["output"], n),
            write_mask=tuple(p["write_mask"]),
            write_key=parse_vector(p["write_key"], n),
            block_id=p.get("block_id"),
        )
        for p in doc["passes"]
    )
    blocks = ()
    if doc["mode"] == "blocked":
        by_block: dict[int, list[Pass]] = {}
        order = []
        for p in passes:
            if p.block_id not in by_block:
                by_block[p.block_id] = []
                order.append(p.block_id)
            by_block[p.block_id].append(p)
        blocks = tuple(
            Block(block_id=bid, write_mask=by_block[bid][0].write_mask,
                  write_key=by_block[bid][0].write_key, passes=tuple(by_block[bid]))
            for bid in order
        )
    return LutProgram(
        radix=n,
        arity=doc["arity"],
        write_positions=tuple(doc["write_positions"]),
        mode=doc["mode"],
        passes=passes,
        no_action_inputs=tuple(parse_vector(s, n) for s in doc["no_action"]),
        blocks=blocks,
    )
