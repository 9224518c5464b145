"""Complete analysis on finite cyclic (or reflecting) tapes.

A machine on a length-n tape has exactly n*s*k^n complete states, so its
entire transition structure fits in one graph and confluence becomes
decidable by reachability closure instead of a bounded semi-decision.
The all-cases rule gives the rulial multiway graph, which on cyclic tapes
is vertex transitive and is the Cayley graph of the semidirect product
Z_n x| (Z_2)^n for s = 1, k = 2; a group-theoretic oracle builds that
Cayley graph independently for cross-checking.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple

from . import canon
from .errors import ResourceLimitError
from .machine import Rule
from .multiway import MultiwayGraph
from .rulespace import (all_cases, case_index, classify, enumerate_rules,
                        rule_from_bitmask, universe_size)

DEFAULT_STATE_SPACE_CAP = 1_000_000

CYCLIC = "cyclic"
REFLECTING = "reflecting"


class FiniteConfig(NamedTuple):
    """Complete state on a length-n tape: head state, position, dense tape."""

    head_state: int
    head_pos: int
    tape: tuple[int, ...]


def state_space_size(s: int, k: int, n: int) -> int:
    return n * s * k ** n


def config_to_index(config: FiniteConfig, s: int, k: int, n: int) -> int:
    value = 0
    for i in range(n - 1, -1, -1):
        value = value * k + config.tape[i]
    return ((config.head_state - 1) * n + config.head_pos) * k ** n + value


def index_to_config(index: int, s: int, k: int, n: int) -> FiniteConfig:
    index, value = divmod(index, k ** n)
    state0, pos = divmod(index, n)
    tape = []
    for _ in range(n):
        value, digit = divmod(value, k)
        tape.append(digit)
    return FiniteConfig(state0 + 1, pos, tuple(tape))


def blank_index(s: int, k: int, n: int) -> int:
    """Blank start: head state 1 at position 0 on an all-blank tape.

    Any position would do on a cyclic tape (rotational symmetry); 0 is
    fixed for reproducibility.
    """
    return config_to_index(FiniteConfig(1, 0, (0,) * n), s, k, n)


def _moved(pos: int, move: int, n: int, boundary: str) -> int:
    if boundary == CYCLIC:
        return (pos + move) % n
    target = pos + move
    if 0 <= target < n:
        return target
    target = pos - move  # reflecting: reverse the move on the spot
    if 0 <= target < n:
        return target
    return pos  # n == 1 leaves nowhere to go either way


class StateTransitionGraph(NamedTuple):
    """Case-labeled transitions over the complete n*s*k^n state space."""

    rule: Rule
    n: int
    boundary: str
    num_nodes: int
    edges: tuple[tuple[int, int, int], ...]  # (src index, case index, dst index)
    out_adj: tuple[tuple[int, ...], ...]

    def halting(self, index: int) -> bool:
        return not self.out_adj[index]

    def config(self, index: int) -> FiniteConfig:
        return index_to_config(index, self.rule.s, self.rule.k, self.n)


def build_stg(rule: Rule, n: int, boundary: str = CYCLIC,
              cap: int = DEFAULT_STATE_SPACE_CAP) -> StateTransitionGraph:
    """Expand every complete state once; deterministic-complete rules give
    outdegree exactly 1 everywhere, halting states outdegree 0."""
    if n < 1:
        raise ValueError("tape length must be >= 1")
    if boundary not in (CYCLIC, REFLECTING):
        raise ValueError(f"unknown boundary mode {boundary!r}")
    s, k = rule.s, rule.k
    total = state_space_size(s, k, n)
    if total > cap:
        raise ResourceLimitError(f"state space n*s*k^n = {total} too large", cap=cap)
    by_input: dict[tuple[int, int], list] = {}
    for case in rule.cases:
        by_input.setdefault(case.input, []).append(case)
    edges = []
    out_adj: list[tuple[int, ...]] = []
    kn = k ** n
    for index in range(total):
        config = index_to_config(index, s, k, n)
        color = config.tape[config.head_pos]
        dsts = []
        for case in by_input.get((config.head_state, color), ()):
            tape_value = index % kn
            tape_value += (case.c_out - color) * k ** config.head_pos
            pos = _moved(config.head_pos, case.move, n, boundary)
            dst = ((case.s_out - 1) * n + pos) * kn + tape_value
            edges.append((index, case_index(case, s, k), dst))
            dsts.append(dst)
        out_adj.append(tuple(dsts))
    return StateTransitionGraph(rule, n, boundary, total, tuple(edges), tuple(out_adj))


def reach_sets(stg: StateTransitionGraph) -> list[int]:
    """Reflexive-transitive reachability, one bitmask per state."""
    reach = [1 << v for v in range(stg.num_nodes)]
    changed = True
    while changed:
        changed = False
        for v in range(stg.num_nodes - 1, -1, -1):
            acc = reach[v]
            for w in stg.out_adj[v]:
                acc |= reach[w]
            if acc != reach[v]:
                reach[v] = acc
                changed = True
    return reach


def _joinable_rows(reach: list[int]) -> list[int]:
    n = len(reach)
    rows = []
    for b in range(n):
        row = 0
        rb = reach[b]
        for c in range(n):
            if rb & reach[c]:
                row |= 1 << c
        rows.append(row)
    return rows


def _confluent_over(start_masks: Iterable[int], reach: list[int],
                    joinable: list[int]) -> bool:
    """Church-Rosser over every listed ancestor set: all b, c reachable
    from a common a must have intersecting reachable sets."""
    for amask in start_masks:
        rest = amask
        while rest:
            low = rest & -rest
            a = low.bit_length() - 1
            rest ^= low
            ra = reach[a]
            inner = ra
            while inner:
                lb = inner & -inner
                b = lb.bit_length() - 1
                inner ^= lb
                if ra & ~joinable[b]:
                    return False
    return True


def confluent_from(stg: StateTransitionGraph, node: int,
                   reach: list[int] | None = None) -> bool:
    """Exact confluence of the evolution started at one state."""
    if reach is None:
        reach = reach_sets(stg)
    joinable = _joinable_rows(reach)
    return _confluent_over([reach[node]], reach, joinable)


def confluent_blank(rule: Rule, n: int, boundary: str = CYCLIC) -> bool:
    stg = build_stg(rule, n, boundary)
    return confluent_from(stg, blank_index(rule.s, rule.k, n))


def fully_confluent(rule: Rule, n: int, boundary: str = CYCLIC) -> bool:
    """Confluence from every one of the n*s*k^n start states."""
    stg = build_stg(rule, n, boundary)
    reach = reach_sets(stg)
    joinable = _joinable_rows(reach)
    full = (1 << stg.num_nodes) - 1
    return _confluent_over([full], reach, joinable)


class ConfluenceCell(NamedTuple):
    p: int
    n: int
    boundary: str
    variant: str  # blank | full
    fail_count: int
    pass_count: int

    @property
    def percent(self) -> int:
        total = self.fail_count + self.pass_count
        if total == 0:
            return 0
        return int(Fraction(100 * self.pass_count, total) + Fraction(1, 2))


def confluence_table(s: int, k: int, ns: Iterable[int], ps: Iterable[int],
                     variant: str = "blank",
                     boundary: str = CYCLIC) -> list[ConfluenceCell]:
    """Pass/fail confluence counts over all non-deterministic rules.

    Purely deterministic rules (no repeated input) are excluded, matching
    the tabulated convention; percentages are exact rationals rendered by
    round-half-up to integer percent.
    """
    if variant not in ("blank", "full"):
        raise ValueError(f"unknown variant {variant!r}")
    cells = []
    for n in ns:
        for p in ps:
            passed = failed = 0
            for rid in enumerate_rules(s, k, p):
                rule = rule_from_bitmask(s, k, rid.bitmask)
                if not classify(rule).some_input_repeated:
                    continue
                if variant == "blank":
                    ok = confluent_blank(rule, n, boundary)
                else:
                    ok = fully_confluent(rule, n, boundary)
                if ok:
                    passed += 1
                else:
                    failed += 1
            cells.append(ConfluenceCell(p, n, boundary, variant, failed, passed))
    return cells


def table_tsv(cells: Iterable[ConfluenceCell]) -> str:
    lines = ["p\tn\tboundary\tvariant\tfailCount\tpassCount\tpercent"]
    for c in cells:
        lines.append(f"{c.p}\t{c.n}\t{c.boundary}\t{c.variant}\t"
                     f"{c.fail_count}\t{c.pass_count}\t{c.percent}")
    return "\n".join(lines) + "\n"


def rulial_rule(s: int, k: int) -> Rule:
    """The rule containing every possible case."""
    return Rule(s, k, tuple(all_cases(s, k)))


def rulial_graph(s: int, k: int, n: int,
                 boundary: str = CYCLIC,
                 cap: int = DEFAULT_STATE_SPACE_CAP) -> StateTransitionGraph:
    """State transition graph of the all-cases rule; it has no halting
    states and out-degree 2*s*k everywhere (cyclic mode)."""
    return build_stg(rulial_rule(s, k), n, boundary, cap)


def evolution_graph(stg: StateTransitionGraph, start: int,
                    max_depth: int | None = None) -> MultiwayGraph:
    """Multiway graph of the evolution from one complete state.

    The reachable subgraph of the transition graph, BFS-layered from the
    start; runs to closure unless a depth cutoff is given. Node objects
    are FiniteConfig values, compatible with the causal-analysis ops.
    """
    if max_depth is None:
        max_depth = stg.num_nodes  # closure is certain within the state count
    out_by_src: dict[int, list[tuple[int, int]]] = {}
    for src, case_idx, dst in stg.edges:
        out_by_src.setdefault(src, []).append((case_idx, dst))
    ids = {start: 0}
    nodes = [stg.config(start)]
    layers = [0]
    halting = [stg.halting(start)]
    edges: list[tuple[int, int, int]] = []
    frontier = [start]
    depth = 0
    order = [start]
    while frontier and depth < max_depth:
        nxt = []
        for src in frontier:
            for case_idx, dst in out_by_src.get(src, ()):
                if dst not in ids:
                    ids[dst] = len(nodes)
                    nodes.append(stg.config(dst))
                    layers.append(depth + 1)
                    halting.append(stg.halting(dst))
                    nxt.append(dst)
                    order.append(dst)
                edges.append((ids[src], case_idx, ids[dst]))
        frontier = nxt
        depth += 1
    open_frontier = any(not stg.halting(i) for i in frontier)
    g = MultiwayGraph(rule=stg.rule, nodes=nodes, layers=layers, halting=halting,
                      edges=edges, roots=(0,), frontier_open=open_frontier,
                      built_depth=depth, node_cap=stg.num_nodes + 1)
    g._index = {cfg: i for i, cfg in enumerate(nodes)}
    g._unexpanded = [ids[i] for i in frontier]
    return g


class Digraph(NamedTuple):
    """Minimal unlabeled directed (multi)graph for isomorphism checks."""

    num_nodes: int
    edges: tuple[tuple[int, int], ...]


def cayley_oracle_tm12(n: int) -> Digraph:
    """Cayley graph of Z_n x| (Z_2)^n, built purely group-theoretically.

    Elements are (rotation r, flip pattern v) with composition
    (r1, w1) then (r2, w2) = (r1 + r2, w1 xor rotate(w2, r1)); the four
    generators flip-or-keep the cell at the origin and rotate one step
    either way, mirroring a single head that writes then moves.
    """
    if not 1 <= n <= 8:
        raise ValueError("oracle supports 1 <= n <= 8")
    size = n * (1 << n)
    generators = [(d % n, u) for d in (1, -1) for u in (0, 1)]
    edges = []
    for r in range(n):
        for v in range(1 << n):
            src = r * (1 << n) + v
            for d, u in generators:
                flips = (u << r) & ((1 << n) - 1) if u else 0
                r2 = (r + d) % n
                v2 = v ^ flips
                edges.append((src, r2 * (1 << n) + v2))
    assert len(edges) == 4 * size
    return Digraph(size, tuple(edges))


def _as_digraph(graph) -> Digraph:
    if isinstance(graph, Digraph):
        return graph
    if isinstance(graph, StateTransitionGraph):
        return Digraph(graph.num_nodes,
                       tuple((src, dst) for src, _, dst in graph.edges))
    if isinstance(graph, MultiwayGraph):
        return Digraph(len(graph.nodes),
                       tuple((src, dst) for src, _, dst in graph.edges))
    raise TypeError(f"cannot interpret {type(graph).__name__} as a digraph")


def is_vertex_transitive(graph) -> bool:
    """Every node reachable from a fixed base by some automorphism, via
    rooted canonical forms. Capped at 10^4 nodes."""
    dg = _as_digraph(graph)
    return canon.is_vertex_transitive(dg.num_nodes, list(dg.edges))


def isomorphic(graph_a, graph_b) -> bool:
    """Directed-graph isomorphism (edge labels ignored) by canonical labeling."""
    a = _as_digraph(graph_a)
    b = _as_digraph(graph_b)
    return canon.isomorphic(a.num_nodes, list(a.edges), b.num_nodes, list(b.edges))
