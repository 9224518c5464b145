"""Brute-force oracles the tests check the real implementations against.

Everything here enumerates explicitly (paths as trees, descendants by
repeated stepping, provenance by last-writer replay) and avoids the
data structures used by the library code it verifies.
"""

from __future__ import annotations

from collections import Counter

from mwtm import Configuration, Rule, successors
from mwtm.rulespace import case_index


def all_paths(rule: Rule, root: Configuration, length: int):
    """Every case-application path of exactly the given length, as a list of
    (configs, cases) with configs one longer than cases. Exponential."""
    paths = [([root], [])]
    for _ in range(length):
        nxt = []
        for configs, cases in paths:
            for case, succ in successors(rule, configs[-1]):
                nxt.append((configs + [succ], cases + [case]))
        paths = nxt
    return paths


def min_layers(rule: Rule, roots, depth: int) -> dict[Configuration, int]:
    """First-reach depth of every configuration, by plain set BFS."""
    layer = {}
    frontier = set(roots)
    for r in frontier:
        layer[r] = 0
    for t in range(depth):
        nxt = set()
        for config in frontier:
            for _, succ in successors(rule, config):
                if succ not in layer:
                    layer[succ] = t + 1
                    nxt.add(succ)
        frontier = nxt
    return layer


def path_count_by_config(rule: Rule, root: Configuration, t: int) -> Counter:
    """Number of length-t paths ending at each configuration."""
    return Counter(configs[-1] for configs, _ in all_paths(rule, root, t))


def descendant_sets(rule: Rule, configs, steps: int) -> dict:
    """config -> set of configurations reachable by exactly ``steps`` cases."""
    result = {}
    for config in configs:
        current = {config}
        for _ in range(steps):
            current = {succ for c in current for _, succ in successors(rule, c)}
        result[config] = current
    return result


def branchial_pairs(rule: Rule, root: Configuration, depth: int, t: int,
                    tau: int = 1) -> set[frozenset]:
    """Unordered slice-t pairs sharing an ancestor exactly tau steps up."""
    layers = min_layers(rule, [root], depth)
    slice_nodes = {c for c, l in layers.items() if l == t}
    pairs = set()
    desc = descendant_sets(rule, layers, tau)
    for ancestor, dset in desc.items():
        hits = sorted(dset & slice_nodes, key=lambda c: (c.head_pos, c.tape, c.head_state))
        for i in range(len(hits)):
            for j in range(i + 1, len(hits)):
                pairs.add(frozenset((hits[i], hits[j])))
    return pairs


def causal_edges_by_paths(rule: Rule, root: Configuration, length: int) -> set:
    """Per-path causal edges unioned over all explicit length-bounded paths.

    Events are identified by (source configuration, case index); provenance
    along one path is a last-writer replay plus the head-token chain. Only
    a lower bound on the full multiway causal edge set (longer walks can
    witness more edges), so callers should check set inclusion.
    """
    edges = set()
    for configs, cases in all_paths(rule, root, length):
        last_writer = {}
        prev_event = None
        for i, case in enumerate(cases):
            src = configs[i]
            event = (src, case_index(case, rule.s, rule.k))
            cell_producer = last_writer.get(src.head_pos)
            for producer in (cell_producer, prev_event):
                if producer is not None and producer != event:
                    edges.add((producer, event))
            last_writer[src.head_pos] = event
            prev_event = event
    return edges


def causal_edges_guarded(g) -> set:
    """All producer -> consumer pairs witnessed by some walk in the graph.

    A head edge needs the consumer to start where the producer landed. A
    cell edge needs both to touch the same position q and some walk from
    the producer's target to the consumer's source along which no
    intermediate event writes q (every event writes at its source's head
    position). Decided by reachability in the q-avoiding subgraph, fully
    independent of the provenance fixpoint.
    """
    out = g.out_edges()
    all_events = [(src, case_idx, dst) for src, case_idx, dst in g.edges]

    def reach_avoiding(start: int, q: int) -> set[int]:
        # nodes reachable from start via walks whose interior sources
        # (including start itself once we leave it) never sit at q
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            if g.nodes[u].head_pos == q:
                continue  # an event leaving u would overwrite q
            for _, v in out[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    edges = set()
    for p_src, p_case, p_dst in all_events:
        producer = (g.nodes[p_src], p_case)
        q = g.nodes[p_src].head_pos
        reachable = reach_avoiding(p_dst, q)
        for e_src, e_case, _ in all_events:
            consumer = (g.nodes[e_src], e_case)
            if producer == consumer:
                continue
            if e_src == p_dst:  # head token handoff
                edges.add((producer, consumer))
            if g.nodes[e_src].head_pos == q and e_src in reachable:
                edges.add((producer, consumer))
    return edges


def reachable(rule: Rule, config: Configuration, depth: int) -> set:
    """Configurations reachable within ``depth`` steps (inclusive of start)."""
    seen = {config}
    frontier = {config}
    for _ in range(depth):
        frontier = {succ for c in frontier for _, succ in successors(rule, c)} - seen
        seen |= frontier
    return seen
