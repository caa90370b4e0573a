"""Blocked LUT generation: group passes that share one deferred write action.

Action nodes are grouped by their parent's written value at the node's write
dimension.  A dynamic (level x group) census table drives a BFS-like schedule:
a group is emitted once all of its members sit at level 1 (parents processed
or noAction); when no group qualifies, the one with the most level-1 members
is split, its deeper members moving to a freshly allocated group id.  Emitting
a block promotes every descendant of its members one level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import CyclicDiagramError, StateDiagram, compute_out_vals
from .program import Block, LutProgram, Pass


def group_offset(n: int, dim: int) -> int:
    """Group ids for dim-wide writes start at 1 + n + ... + n**(dim-1)."""
    return sum(n ** i for i in range(dim))


@dataclass
class GrpLvlTable:
    """Census of unprocessed action nodes per (level, group), plus the working
    diagram copy whose node attributes (level, grp_num, pass_num) it mirrors."""

    work: StateDiagram
    counts: dict = field(default_factory=dict)  # level -> {group: count}
    max_group: int = 0
    max_level: int = 0
    next_pass: int = 1

    def _row(self, level: int) -> dict:
        return self.counts.setdefault(level, {})

    def get(self, level: int, group: int) -> int:
        return self.counts.get(level, {}).get(group, 0)

    def add(self, level: int, group: int, delta: int) -> None:
        row = self._row(level)
        value = row.get(group, 0) + delta
        if value < 0:
            raise RuntimeError(f"grpLvl[{level}][{group}] went negative")
        if value:
            row[group] = value
        else:
            row.pop(group, None)

    def deeper_sum(self, group: int) -> int:
        return sum(self.counts.get(l, {}).get(group, 0)
                   for l in range(2, self.max_level + 1))

    def top_level_groups(self) -> dict:
        return dict(self.counts.get(1, {}))

    def top_level_empty(self) -> bool:
        return not self.counts.get(1, {})

    def total(self) -> int:
        return sum(c for row in self.counts.values() for c in row.values())

    def snapshot(self) -> dict:
        return {level: dict(sorted(row.items()))
                for level, row in sorted(self.counts.items()) if row}


def init_grp_lvl(diagram: StateDiagram) -> GrpLvlTable:
    """Assign initial group numbers and build the census table.

    Works on a private copy of the diagram; the argument is left untouched.
    Each action node lands in group parent.out_val(write_dim) + offset, the
    offset keeping different write dimensions in disjoint id ranges.
    """
    if diagram.cycles:
        raise CyclicDiagramError("blocked compiler requires a cycle-free diagram")
    compute_out_vals(diagram)
    work = diagram.working_copy()
    table = GrpLvlTable(work=work)
    n = work.radix
    for nd in work.nodes.values():
        if nd.no_action:
            continue
        parent = work.node(nd.parent)
        g = parent.out_val[nd.write_dim] + group_offset(n, nd.write_dim)
        nd.grp_num = g
        table.add(nd.level, g, 1)
        table.max_group = max(table.max_group, g)
        table.max_level = max(table.max_level, nd.level)
    return table


def select_next_group(table: GrpLvlTable) -> tuple[int, bool]:
    """Pick the next group to emit, splitting when no pure group exists.

    A pure group has level-1 members only; the smallest qualifying id wins.
    Otherwise the group with the most level-1 members (ties to the smallest
    id) is split: members below level 1 move to the fresh id max_group + 1,
    and the now-pure original id is returned.
    """
    top = table.top_level_groups()
    if not top:
        raise RuntimeError("select_next_group called with an empty top level")
    pure = sorted(g for g in top if table.deeper_sum(g) == 0)
    if pure:
        return pure[0], False
    g_tgt = min(top, key=lambda g: (-top[g], g))
    table.max_group += 1
    fresh = table.max_group
    for level in range(2, table.max_level + 1):
        moved = table.get(level, g_tgt)
        if moved:
            table.add(level, fresh, moved)
            table.add(level, g_tgt, -moved)
    for nd in table.work.nodes.values():
        if nd.grp_num == g_tgt and nd.level is not None and nd.level > 1:
            nd.grp_num = fresh
    return g_tgt, True


def _strict_descendants(work: StateDiagram, vec):
    stack = list(work.node(vec).children)
    while stack:
        v = stack.pop()
        yield work.node(v)
        stack.extend(work.node(v).children)


def emit_block(table: GrpLvlTable, g_tgt: int, block_id: int) -> Block:
    """Number the target group's passes and promote their subtrees one level."""
    work = table.work
    spec = work.spec
    members = sorted(nd.vector for nd in work.nodes.values()
                     if nd.grp_num == g_tgt and nd.pass_num is None)
    if not members:
        raise RuntimeError(f"group {g_tgt} has no unprocessed members")
    for vec in members:
        if work.node(vec).level != 1:
            raise RuntimeError(f"group {g_tgt} member {vec} is below level 1")
    if table.get(1, g_tgt) != len(members):
        raise RuntimeError("grpLvl census disagrees with the diagram")

    passes = []
    write_mask = write_key = None
    for vec in members:
        nd = work.node(vec)
        nd.pass_num = table.next_pass
        table.next_pass += 1
        mask = spec.extended_positions(nd.write_dim)
        out = work.effective_outputs[vec]
        key = tuple(out[p] for p in mask)
        if write_mask is None:
            write_mask, write_key = mask, key
        elif (mask, key) != (write_mask, write_key):
            raise RuntimeError(f"group {g_tgt} mixes write actions")
        passes.append(Pass(pass_num=nd.pass_num, input_key=vec, output=out,
                           write_mask=mask, write_key=key, block_id=block_id))
        for v in _strict_descendants(work, vec):
            table.add(v.level - 1, v.grp_num, 1)
            table.add(v.level, v.grp_num, -1)
            v.level -= 1
    # zero the consumed top-level entry (members are now processed)
    table.add(1, g_tgt, -len(members))
    return Block(block_id=block_id, write_mask=write_mask, write_key=write_key,
                 passes=tuple(passes))


def compile_blocked(diagram: StateDiagram, trace_sink: list | None = None) -> LutProgram:
    """Full blocked schedule; optionally records one table snapshot per block."""
    table = init_grp_lvl(diagram)
    action_total = len(diagram.action_nodes())
    if trace_sink is not None:
        trace_sink.append({"iteration": 0, "selected_group": None, "split": False,
                           "table": table.snapshot()})
    blocks = []
    while not table.top_level_empty():
        g_tgt, did_split = select_next_group(table)
        block = emit_block(table, g_tgt, block_id=len(blocks) + 1)
        blocks.append(block)
        if table.total() != action_total - (table.next_pass - 1):
            raise RuntimeError("grpLvl bookkeeping lost or duplicated nodes")
        if trace_sink is not None:
            trace_sink.append({
                "iteration": len(blocks),
                "selected_group": g_tgt,
                "split": did_split,
                "block_passes": [p.pass_num for p in block.passes],
                "table": table.snapshot(),
            })
    if table.next_pass - 1 != action_total:
        raise RuntimeError("blocked schedule did not cover every action node")

    passes = tuple(p for b in blocks for p in b.passes)
    return LutProgram(
        radix=diagram.radix,
        arity=diagram.spec.arity,
        write_positions=diagram.spec.write_positions,
        mode="blocked",
        passes=passes,
        no_action_inputs=tuple(sorted(diagram.roots)),
        blocks=tuple(blocks),
    )
