"""Multiway graph construction and the structure extracted from it.

The multiway graph is the breadth-first closure of the one-step evolution
from a set of root configurations, with identical configurations merged
globally. Each node carries the depth at which it was first reached (its
layer) and a halting flag; edges are labeled by the case index that
produced them. Because merged states can be re-reached on longer paths,
layers are not a global layering of the edge set, only a foliation by
first reach; a slice is all nodes of one layer.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import DepthInsufficientError, ResourceLimitError
from .machine import (BLANK, Configuration, Rule, applicable_cases,
                      config_sort_key, successors)
from .rulespace import case_index

DEFAULT_NODE_CAP = 10_000_000


@dataclass
class MultiwayGraph:
    """Deduplicated configurations with case-labeled transitions.

    Nodes are integer ids in discovery order (roots first, then BFS order),
    which is deterministic given the rule and roots. ``frontier_open`` is
    True when the depth cutoff was reached while unexpanded non-halting
    nodes remained; a graph with ``frontier_open`` False is closed: every
    branch of the evolution halts or cycles inside it.
    """

    rule: Rule
    nodes: list[Configuration]
    layers: list[int]
    halting: list[bool]
    edges: list[tuple[int, int, int]]  # (src id, case index, dst id)
    roots: tuple[int, ...]
    frontier_open: bool
    built_depth: int
    node_cap: int
    _index: dict[Configuration, int] = field(repr=False, default_factory=dict)
    _unexpanded: list[int] = field(repr=False, default_factory=list)
    _out: list[list[tuple[int, int]]] | None = field(repr=False, default=None)
    _in: list[list[tuple[int, int]]] | None = field(repr=False, default=None)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def is_closed(self) -> bool:
        return not self.frontier_open

    def node_id(self, config: Configuration) -> int | None:
        return self._index.get(config)

    def max_layer(self) -> int:
        return max(self.layers)

    def slice_ids(self, t: int) -> list[int]:
        return [i for i, layer in enumerate(self.layers) if layer == t]

    def out_edges(self) -> list[list[tuple[int, int]]]:
        """Per-node list of (case index, dst id)."""
        if self._out is None:
            out: list[list[tuple[int, int]]] = [[] for _ in self.nodes]
            for src, case_idx, dst in self.edges:
                out[src].append((case_idx, dst))
            self._out = out
        return self._out

    def in_edges(self) -> list[list[tuple[int, int]]]:
        """Per-node list of (case index, src id)."""
        if self._in is None:
            inc: list[list[tuple[int, int]]] = [[] for _ in self.nodes]
            for src, case_idx, dst in self.edges:
                inc[dst].append((case_idx, src))
            self._in = inc
        return self._in

    def has_cycle(self) -> bool:
        """Directed cycle test over the whole edge set (Kahn peeling)."""
        indeg = [0] * len(self.nodes)
        for _, _, dst in self.edges:
            indeg[dst] += 1
        queue = [i for i, d in enumerate(indeg) if d == 0]
        seen = 0
        out = self.out_edges()
        while queue:
            u = queue.pop()
            seen += 1
            for _, v in out[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
        return seen != len(self.nodes)


def build(rule: Rule, roots: Iterable[Configuration], max_depth: int,
          max_nodes: int = DEFAULT_NODE_CAP) -> MultiwayGraph:
    """BFS closure of the step relation from the roots, merging equal states.

    Stops early (with a closed graph) once no unexpanded non-halting nodes
    remain. Raises ResourceLimitError when the node count would exceed
    ``max_nodes``; the error reports the cap and the depth reached.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    root_list = sorted(set(roots), key=config_sort_key)
    if not root_list:
        raise ValueError("need at least one root configuration")
    g = MultiwayGraph(rule=rule, nodes=[], layers=[], halting=[], edges=[],
                      roots=tuple(range(len(root_list))), frontier_open=False,
                      built_depth=0, node_cap=max_nodes)
    for config in root_list:
        g._index[config] = len(g.nodes)
        g.nodes.append(config)
        g.layers.append(0)
        g.halting.append(not applicable_cases(rule, config))
    g._unexpanded = list(g.roots)
    return extend(g, max_depth)


def extend(g: MultiwayGraph, extra_depth: int) -> MultiwayGraph:
    """Continue the BFS for up to ``extra_depth`` more layers, in place.

    Extending a depth-t graph by d is identical to building to t+d from
    the roots.
    """
    g._out = None
    g._in = None
    rule = g.rule
    frontier = g._unexpanded
    depth = g.built_depth
    target = depth + extra_depth
    while frontier and depth < target:
        nxt: list[int] = []
        for src in frontier:
            if g.halting[src]:
                continue
            for case, succ in successors(rule, g.nodes[src]):
                dst = g._index.get(succ)
                if dst is None:
                    dst = len(g.nodes)
                    if dst >= g.node_cap:
                        raise ResourceLimitError("multiway node cap exceeded",
                                                 cap=g.node_cap, depth=depth)
                    g._index[succ] = dst
                    g.nodes.append(succ)
                    g.layers.append(depth + 1)
                    g.halting.append(not applicable_cases(rule, succ))
                    nxt.append(dst)
                g.edges.append((src, case_index(case, rule.s, rule.k), dst))
        frontier = nxt
        depth += 1
    g._unexpanded = frontier
    g.built_depth = depth
    g.frontier_open = any(not g.halting[i] for i in frontier)
    return g


class TerminationClass(Enum):
    CLOSED_ALL_HALT = "closed-all-halt"
    CLOSED_WITH_CYCLES = "closed-with-cycles"
    OPEN_AT_DEPTH = "open-at-depth"


def termination_class(g: MultiwayGraph) -> TerminationClass:
    """Closed and acyclic (all sinks halting), closed with a cycle, or open."""
    if g.frontier_open:
        return TerminationClass.OPEN_AT_DEPTH
    if g.has_cycle():
        return TerminationClass.CLOSED_WITH_CYCLES
    return TerminationClass.CLOSED_ALL_HALT


class PathWeights(NamedTuple):
    """Exact path counts per node: weights[v] = number of length-t case
    sequences leading from a root to v."""

    t: int
    weights: dict[int, int]


def path_weights(g: MultiwayGraph, t: int) -> PathWeights:
    """Iterate w_{i+1}(v) = sum of w_i over in-edges, from the root indicator.

    Exact integers throughout. Requires the graph closed or built at least
    to depth t, otherwise weight would leak at the open frontier.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if g.frontier_open and t > g.built_depth:
        raise DepthInsufficientError(
            f"graph built to depth {g.built_depth} is open; cannot count length-{t} paths")
    weights: dict[int, int] = {r: 1 for r in g.roots}
    out = g.out_edges()
    for _ in range(t):
        nxt: dict[int, int] = {}
        for u, w in weights.items():
            for _, v in out[u]:
                nxt[v] = nxt.get(v, 0) + w
        weights = nxt
    return PathWeights(t, weights)


def head_weight_distribution(g: MultiwayGraph, t: int) -> dict[int, int]:
    """Marginal of path weights over head position at step t."""
    dist: dict[int, int] = {}
    for node_id, w in path_weights(g, t).weights.items():
        pos = g.nodes[node_id].head_pos
        dist[pos] = dist.get(pos, 0) + w
    return dist


class BranchialGraph(NamedTuple):
    """Slice-t nodes joined through common ancestors tau steps back.

    ``hyperedges`` has one entry per ancestor with at least two exact-tau
    descendants in the slice; ``edges`` is the pairwise projection, which
    for tau=1 is exactly the joins-by-immediate-common-ancestor relation.
    """

    slice_index: int
    tau: int
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    hyperedges: tuple[tuple[int, ...], ...]


def branchial(g: MultiwayGraph, t: int, tau: int = 1) -> BranchialGraph:
    if tau < 1:
        raise ValueError("tau must be >= 1")
    vertices = g.slice_ids(t)
    if not vertices:
        raise ValueError(f"no nodes in slice {t}")
    # Walk tau steps backwards from the slice: after j rounds, desc[u] is
    # the set of slice nodes reachable from u by exactly j edges.
    desc: dict[int, set[int]] = {v: {v} for v in vertices}
    inc = g.in_edges()
    for _ in range(tau):
        nxt: dict[int, set[int]] = {}
        for v, ds in desc.items():
            for _, u in inc[v]:
                nxt.setdefault(u, set()).update(ds)
        desc = nxt
    hyper = sorted({tuple(sorted(ds)) for ds in desc.values() if len(ds) >= 2})
    pairs = set()
    for h in hyper:
        for i in range(len(h)):
            for j in range(i + 1, len(h)):
                pairs.add((h[i], h[j]))
    return BranchialGraph(t, tau, tuple(sorted(vertices)), tuple(sorted(pairs)),
                          tuple(hyper))


def state_count_sequence(rule: Rule, roots: Iterable[Configuration], steps: int,
                         max_nodes: int = DEFAULT_NODE_CAP) -> list[int]:
    """Cumulative distinct-state counts: entry t = states first reached by depth t.

    Entry 0 counts the roots; once the evolution closes, the count stays
    constant.
    """
    g = build(rule, roots, steps, max_nodes)
    per_layer = Counter(g.layers)
    counts = []
    total = 0
    for t in range(steps + 1):
        total += per_layer.get(t, 0)
        counts.append(total)
    return counts


class TapeRow(NamedTuple):
    node_id: int
    colors: tuple[int, ...]
    head_pos: int
    head_state: int
    halted: bool


class TapeStack(NamedTuple):
    """Slice-t tapes over a common window, rows in canonical order."""

    slice_index: int
    lo: int
    hi: int
    rows: tuple[TapeRow, ...]


def tape_stack(g: MultiwayGraph, t: int) -> TapeStack:
    """Rows are slice-t configurations sorted canonically (head position,
    tape, head state); the window covers every non-blank cell and head."""
    ids = g.slice_ids(t)
    if not ids:
        raise ValueError(f"no nodes in slice {t}")
    ids.sort(key=lambda i: config_sort_key(g.nodes[i]))
    positions = []
    for i in ids:
        node = g.nodes[i]
        positions.append(node.head_pos)
        positions.extend(p for p, _ in node.tape)
    lo, hi = min(positions), max(positions)
    rows = []
    for i in ids:
        node = g.nodes[i]
        colors = tuple(node.color_at(p) for p in range(lo, hi + 1))
        rows.append(TapeRow(i, colors, node.head_pos, node.head_state, g.halting[i]))
    return TapeStack(t, lo, hi, tuple(rows))


class LayerOverlay(NamedTuple):
    layer: int
    lo: int
    hi: int
    mean_colors: tuple[Fraction, ...]
    head_density: tuple[Fraction, ...]


def averaged_overlay(g: MultiwayGraph, weights: Mapping[int, int] | None = None
                     ) -> list[LayerOverlay]:
    """Per-layer mean color and head density per absolute position.

    Plain arithmetic means over the slice rows by default (exact
    rationals); pass path weights keyed by node id to weight rows by path
    count instead.
    """
    overlays = []
    for t in range(g.max_layer() + 1):
        stack = tape_stack(g, t)
        row_weights = []
        for row in stack.rows:
            w = 1 if weights is None else weights.get(row.node_id, 0)
            row_weights.append(w)
        total = sum(row_weights)
        width = stack.hi - stack.lo + 1
        mean_colors = []
        head_density = []
        for col in range(width):
            color_sum = sum(w * row.colors[col]
                            for w, row in zip(row_weights, stack.rows))
            head_sum = sum(w for w, row in zip(row_weights, stack.rows)
                           if row.head_pos == stack.lo + col)
            mean_colors.append(Fraction(color_sum, total) if total else Fraction(0))
            head_density.append(Fraction(head_sum, total) if total else Fraction(0))
        overlays.append(LayerOverlay(t, stack.lo, stack.hi,
                                     tuple(mean_colors), tuple(head_density)))
    return overlays
