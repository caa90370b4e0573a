"""Directed state diagram of an in-place truth table.

Every length-m input vector is a node; its single outgoing edge points at the
table output.  Nodes whose output equals themselves (noAction) are the roots.
Once every cycle of length >= 2 has been broken by redirecting one member edge
to a write-dimension-extended alternative output, the non-self edges form a
forest and the LUT compilers can traverse it.
"""

from __future__ import annotations

import copy
import itertools
from dataclasses import dataclass, field

from .mvl import FunctionSpec, all_vectors, vector_str


class CyclicDiagramError(RuntimeError):
    """Raised when an operation requiring a cycle-free diagram meets a cycle."""


class NoValidRedirectError(RuntimeError):
    """No alternative output can break a cycle (typically no kept positions)."""

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        names = " -> ".join(vector_str(v) for v in self.cycle)
        super().__init__(f"cannot break cycle {names}: no acyclic-safe redirect")


@dataclass
class StateNode:
    """One truth-table state plus the attributes the compilers consume.

    parent is the effective output vector (the backward edge target); roots
    point at themselves.  write_dim exceeds the table's write width only on
    cycle-broken edges.  grp_num and pass_num are working fields written by
    the blocked compiler on its private copy.
    """

    vector: tuple[int, ...]
    no_action: bool
    parent: tuple[int, ...]
    children: tuple[tuple[int, ...], ...] = ()
    level: int | None = None
    write_dim: int = 0
    out_val: dict = field(default_factory=dict)
    grp_num: int | None = None
    pass_num: int | None = None


@dataclass
class Redirect:
    """Record of one cycle-broken edge."""

    source: tuple[int, ...]
    original_output: tuple[int, ...]
    new_output: tuple[int, ...]
    write_dim: int


@dataclass
class StateDiagram:
    radix: int
    spec: FunctionSpec
    nodes: dict
    roots: tuple
    effective_outputs: dict
    cycles: tuple = ()
    redirects: tuple = ()

    def node(self, vec) -> StateNode:
        return self.nodes[vec]

    def action_nodes(self):
        return [nd for nd in self.nodes.values() if not nd.no_action]

    def working_copy(self) -> "StateDiagram":
        """Deep copy for compilers that mutate node attributes."""
        return copy.deepcopy(self)


def _find_cycles(vectors, out):
    """Cycles of length >= 2 in the functional graph, deterministic order.

    Each cycle is rotated to start at its smallest member.
    """
    resolved = set()
    cycles = []
    for start in vectors:
        if start in resolved:
            continue
        path, pos = [], {}
        v = start
        while True:
            if v in resolved:
                break
            if v in pos:
                cyc = path[pos[v]:]
                k = cyc.index(min(cyc))
                cycles.append(tuple(cyc[k:] + cyc[:k]))
                break
            pos[v] = len(path)
            path.append(v)
            nxt = out[v]
            if nxt == v:
                break
            v = nxt
        resolved.update(path)
    return tuple(cycles)


def _levels_and_children(vectors, out, roots):
    """BFS levels from the roots; nodes trapped behind cycles get level None."""
    children = {v: [] for v in vectors}
    for v in vectors:
        if out[v] != v:
            children[out[v]].append(v)
    for v in vectors:
        children[v].sort()
    levels = {v: None for v in vectors}
    frontier = list(roots)
    for r in roots:
        levels[r] = 0
    while frontier:
        nxt = []
        for u in frontier:
            for c in children[u]:
                if levels[c] is None:
                    levels[c] = levels[u] + 1
                    nxt.append(c)
        frontier = nxt
    return levels, children


def _assemble(spec, effective, write_dims, cycles, redirects) -> StateDiagram:
    n, m = spec.radix, spec.arity
    vectors = list(all_vectors(n, m))
    roots = tuple(v for v in vectors if effective[v] == v)
    levels, children = _levels_and_children(vectors, effective, roots)
    nodes = {}
    for v in vectors:
        nodes[v] = StateNode(
            vector=v,
            no_action=effective[v] == v,
            parent=effective[v],
            children=tuple(children[v]),
            level=levels[v],
            write_dim=write_dims.get(v, spec.write_width),
        )
    return StateDiagram(radix=n, spec=spec, nodes=nodes, roots=roots,
                        effective_outputs=dict(effective),
                        cycles=cycles, redirects=tuple(redirects))


def build_diagram(spec: FunctionSpec) -> StateDiagram:
    """Diagram straight off the truth table; cycles reported but intact."""
    effective = dict(spec.outputs)
    vectors = list(all_vectors(spec.radix, spec.arity))
    cycles = _find_cycles(vectors, effective)
    return _assemble(spec, effective, {}, cycles, [])


def _reaches(effective, start, target, limit) -> bool:
    """True when following outputs from start touches target within limit steps."""
    v = start
    for _ in range(limit + 1):
        if v == target:
            return True
        nxt = effective[v]
        if nxt == v:
            return False
        v = nxt
    return False


def break_cycles(diagram: StateDiagram) -> StateDiagram:
    """Redirect one edge per cycle to a write-extended output, yielding a forest.

    For the cycle edge x -> y (x the smallest cycle member), candidates y' keep
    y's written digits and change one or more kept digits.  Candidates are
    tried in ascending base-n order, noAction roots first, and the first one
    whose output chain never returns to x wins.  The edge's write dimension is
    raised just enough to cover the modified kept positions.
    """
    if not diagram.cycles:
        return diagram
    spec = diagram.spec
    n, m = spec.radix, spec.arity
    kept = spec.kept_positions
    effective = dict(diagram.effective_outputs)
    write_dims = {}
    redirects = []
    limit = n ** m

    for cycle in sorted(diagram.cycles):
        x = min(cycle)
        y = effective[x]
        candidates = []
        for kept_digits in itertools.product(range(n), repeat=len(kept)):
            cand = list(y)
            for p, d in zip(kept, kept_digits):
                cand[p] = d
            cand = tuple(cand)
            if cand != y:
                candidates.append(cand)
        ordered = ([c for c in candidates if effective[c] == c]
                   + [c for c in candidates if effective[c] != c])
        chosen = None
        for cand in ordered:
            if not _reaches(effective, cand, x, limit):
                chosen = cand
                break
        if chosen is None:
            raise NoValidRedirectError(cycle)
        modified = [p for p in kept if chosen[p] != y[p]]
        dim = spec.write_width
        while not set(modified) <= set(spec.extended_positions(dim)):
            dim += 1
        effective[x] = chosen
        write_dims[x] = dim
        redirects.append(Redirect(source=x, original_output=y,
                                  new_output=chosen, write_dim=dim))

    vectors = list(all_vectors(n, m))
    remaining = _find_cycles(vectors, effective)
    if remaining:
        raise NoValidRedirectError(remaining[0])
    broken = _assemble(spec, effective, write_dims, (), redirects)
    if any(nd.level is None for nd in broken.nodes.values()):
        raise CyclicDiagramError("some node does not reach a root after breaking")
    return broken


def compute_out_vals(diagram: StateDiagram) -> StateDiagram:
    """Populate out_val on every node for all usable write dimensions.

    out_val[d] is the base-n value of the node's d written digits; parents'
    entries key the blocked compiler's grouping.  Idempotent.
    """
    if diagram.cycles:
        raise CyclicDiagramError("out_val requires a cycle-free diagram")
    spec = diagram.spec
    for nd in diagram.nodes.values():
        if not nd.out_val:
            nd.out_val = {d: spec.out_value(nd.vector, d)
                          for d in range(spec.write_width, spec.arity + 1)}
    return diagram


def export_diagram(diagram: StateDiagram) -> dict:
    """JSON-able dump of the diagram for debugging and figures."""
    return {
        "radix": diagram.radix,
        "arity": diagram.spec.arity,
        "write_positions": list(diagram.spec.write_positions),
        "roots": [vector_str(r) for r in diagram.roots],
        "cycles": [[vector_str(v) for v in cyc] for cyc in diagram.cycles],
        "redirects": [
            {
                "source": vector_str(r.source),
                "original_output": vector_str(r.original_output),
                "new_output": vector_str(r.new_output),
                "write_dim": r.write_dim,
            }
            for r in diagram.redirects
        ],
        "nodes": [
            {
                "vector": vector_str(nd.vector),
                "parent": vector_str(nd.parent),
                "no_action": nd.no_action,
                "level": nd.level,
                "write_dim": nd.write_dim,
            }
            for _, nd in sorted(diagram.nodes.items())
        ],
    }
