"""Non-blocked LUT generation: pre-order DFS over each tree of the diagram.

Every action node becomes one pass (compare then immediate write), numbered so
that every node is processed before any of its descendants; roots are noAction
states and get no pass.  Trees are visited in descending root value and
siblings in ascending value, which fixes a canonical schedule and, for the
binary adder, yields the familiar 110, 100, 001, 011 ordering.
"""

from __future__ import annotations

from .diagram import CyclicDiagramError, StateDiagram
from .mvl import vector_value
from .program import LutProgram, Pass


def compile_nonblocked(diagram: StateDiagram) -> LutProgram:
    if diagram.cycles:
        raise CyclicDiagramError("non-blocked compiler requires a cycle-free diagram")
    spec = diagram.spec
    passes = []

    roots = sorted(diagram.roots, key=lambda v: vector_value(v, diagram.radix),
                   reverse=True)
    for root in roots:
        stack = [root]
        while stack:
            vec = stack.pop()
            nd = diagram.node(vec)
            if not nd.no_action:
                mask = spec.extended_positions(nd.write_dim)
                out = diagram.effective_outputs[vec]
                passes.append(Pass(
                    pass_num=len(passes) + 1,
                    input_key=vec,
                    output=out,
                    write_mask=mask,
                    write_key=tuple(out[p] for p in mask),
                ))
            # children are stored ascending; reversed push keeps pop order ascending
            stack.extend(reversed(nd.children))

    return LutProgram(
        radix=diagram.radix,
        arity=spec.arity,
        write_positions=spec.write_positions,
        mode="nonblocked",
        passes=tuple(passes),
        no_action_inputs=tuple(sorted(diagram.roots)),
    )
