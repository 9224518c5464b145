"""Update events, causal dependence, and confluence checks.

Every edge of a multiway graph is an event: one application of a rule
case. An event consumes the head token of its source node and the color
of the cell under the head, and produces the new head token plus the
written cell. Causal edges run producer -> consumer.

Through merged states a cell read can have several possible producers
(one per ancestry), so the multiway causal graph uses union provenance:
an event depends on every event that last wrote its read cell along some
ancestry, and on every event that produced its source node's head token.
A single evolution path has single-valued provenance, and its causal
graph is always a subgraph of the multiway one.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from . import canon
from .errors import NonComposablePathError
from .multiway import MultiwayGraph

INIT = -1  # pseudo-producer for reads of never-written cells / root head tokens


class Event(NamedTuple):
    """One rule application: source node, case index, successor node.

    (src, case_index) identifies the event; dst and read_pos are derived.
    """

    src: int
    case_index: int
    dst: int
    read_pos: int


@dataclass(frozen=True)
class CausalGraph:
    """Events as nodes, producer -> consumer dependence as edges.

    ``events`` may contain repeats when built from a path that revisits an
    event (a loop walked twice is two occurrences). ``init_edges`` lists
    consumers fed by the initial condition; empty unless requested.
    """

    events: tuple[Event, ...]
    edges: tuple[tuple[int, int], ...]  # indexes into events
    init_edges: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.events)

    def has_cycles(self) -> bool:
        indeg = [0] * len(self.events)
        out: list[list[int]] = [[] for _ in self.events]
        for u, v in self.edges:
            out[u].append(v)
            indeg[v] += 1
        queue = [i for i, d in enumerate(indeg) if d == 0]
        seen = 0
        while queue:
            u = queue.pop()
            seen += 1
            for v in out[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
        return seen != len(self.events)

    def canonical(self) -> canon.Certificate:
        return canon.canonical_form(len(self.events), list(self.edges))


def events(g: MultiwayGraph) -> list[Event]:
    """One event per multiway edge, in edge discovery order."""
    return [Event(src, case_idx, dst, g.nodes[src].head_pos)
            for src, case_idx, dst in g.edges]


def causal_graph(g: MultiwayGraph, include_init: bool = False) -> CausalGraph:
    """Multiway causal graph under union provenance.

    prov(u, q) is the set of events that can have last written cell q on
    some ancestry of u (INIT for the initial condition), computed to a
    fixpoint because merged and cyclic graphs make ancestries recursive.
    The event at node u reading position q then depends on
    prov(u, q) plus every event producing u's head token.
    """
    evs = events(g)
    ev_index = {(e.src, e.case_index): i for i, e in enumerate(evs)}
    in_events: list[list[int]] = [[] for _ in g.nodes]
    for i, e in enumerate(evs):
        in_events[e.dst].append(i)
    is_root = [False] * len(g.nodes)
    for r in g.roots:
        is_root[r] = True

    # Collect the (node, position) provenance queries actually needed.
    queries: set[tuple[int, int]] = set()
    work = [(e.src, e.read_pos) for e in evs]
    while work:
        u, q = work.pop()
        if (u, q) in queries:
            continue
        queries.add((u, q))
        for i in in_events[u]:
            w = evs[i].src
            if evs[i].read_pos != q:  # producer wrote elsewhere: look further back
                work.append((w, q))

    prov: dict[tuple[int, int], set[int]] = {key: set() for key in queries}
    for (u, q) in queries:
        if is_root[u]:
            prov[(u, q)].add(INIT)
    changed = True
    while changed:
        changed = False
        for (u, q) in queries:
            acc = prov[(u, q)]
            before = len(acc)
            for i in in_events[u]:
                e = evs[i]
                if e.read_pos == q:  # that event wrote exactly this cell
                    acc.add(i)
                else:
                    acc |= prov[(e.src, q)]
            if len(acc) != before:
                changed = True

    edge_set: set[tuple[int, int]] = set()
    init_consumers: set[int] = set()
    for i, e in enumerate(evs):
        producers = set(prov[(e.src, e.read_pos)])
        producers.update(in_events[e.src])
        if is_root[e.src]:
            producers.add(INIT)
        for p in producers:
            if p == INIT:
                init_consumers.add(i)
            else:
                edge_set.add((p, i))
    return CausalGraph(tuple(evs), tuple(sorted(edge_set)),
                       tuple(sorted(init_consumers)) if include_init else ())


def path_causal_graph(g: MultiwayGraph, path: Sequence[Event],
                      include_init: bool = False) -> CausalGraph:
    """Causal graph of one evolution path, with single-valued provenance.

    Nodes are the event occurrences along the path (repeats kept), so the
    result is acyclic; mapped back to event identity it is a subgraph of
    causal_graph(g).
    """
    if not path:
        return CausalGraph((), ())
    if path[0].src not in g.roots:
        raise NonComposablePathError("path must start at a root")
    for a, b in zip(path, path[1:]):
        if a.dst != b.src:
            raise NonComposablePathError(
                f"event {b!r} does not follow from {a!r}")
    last_writer: dict[int, int] = {}
    edge_set: set[tuple[int, int]] = set()
    init_consumers: set[int] = set()
    for i, e in enumerate(path):
        cell_producer = last_writer.get(e.read_pos, INIT)
        head_producer = i - 1 if i > 0 else INIT
        for p in (cell_producer, head_producer):
            if p == INIT:
                init_consumers.add(i)
            elif p != i:
                edge_set.add((p, i))
        last_writer[e.read_pos] = i
    return CausalGraph(tuple(path), tuple(sorted(edge_set)),
                       tuple(sorted(init_consumers)) if include_init else ())


class ConfluenceVerdict(NamedTuple):
    """Outcome of the bounded divergence-rejoining check.

    kind is "confluent" (every divergence re-merges within the depth),
    "counterexample" (a divergence whose two reachable sets are fully
    explored and disjoint), or "inconclusive". Verdicts always carry the
    depth they were decided at: confluence to depth D says nothing beyond D.
    """

    kind: str
    depth: int
    witness: tuple[int, int] | None = None


def _reach_sets(g: MultiwayGraph) -> list[int]:
    """Reflexive-transitive reachability as bitmasks over node ids."""
    n = len(g.nodes)
    out = g.out_edges()
    reach = [1 << v for v in range(n)]
    changed = True
    while changed:
        changed = False
        for v in range(n - 1, -1, -1):
            acc = reach[v]
            for _, w in out[v]:
                acc |= reach[w]
            if acc != reach[v]:
                reach[v] = acc
                changed = True
    return reach


def confluence_bounded(rule, roots, depth: int,
                       max_nodes: int = 200_000) -> ConfluenceVerdict:
    """Build to the given depth and test every divergence for re-merging.

    A counterexample needs both diverging successors' reachable sets fully
    closed (no open frontier inside) and disjoint; open disjoint sets stay
    inconclusive. Confluence can be undecidable in general, so a
    "confluent" verdict is only ever relative to its depth.
    """
    from .multiway import build  # local import to avoid cycle at module load

    if depth < 1:
        raise ValueError("depth must be >= 1")
    g = build(rule, roots, depth, max_nodes)
    reach = _reach_sets(g)
    open_mask = 0
    for i in g._unexpanded:
        if not g.halting[i]:
            open_mask |= 1 << i
    out = g.out_edges()
    unresolved = False
    for u in range(len(g.nodes)):
        succs = sorted({dst for _, dst in out[u]})
        for i in range(len(succs)):
            for j in range(i + 1, len(succs)):
                a, b = succs[i], succs[j]
                if reach[a] & reach[b]:
                    continue
                if (reach[a] | reach[b]) & open_mask:
                    unresolved = True
                else:
                    return ConfluenceVerdict("counterexample", depth, (a, b))
    if unresolved:
        return ConfluenceVerdict("inconclusive", depth)
    return ConfluenceVerdict("confluent", depth)


class InvarianceReport(NamedTuple):
    """Pairwise isomorphism of sampled path causal graphs.

    isomorphic is "yes" (all pairs), "no" (no pair), or "mixed", with a
    witness pair of sample indexes for the non-isomorphic case.
    """

    isomorphic: str
    paths_sampled: int
    path_length: int
    witness: tuple[int, int] | None = None


def sample_paths(g: MultiwayGraph, n_paths: int, length: int,
                 seed: int) -> list[list[Event]]:
    """Uniform random out-edge walks of exactly the given length.

    Deterministic for a given seed; walks that dead-end early are
    discarded and retried up to a fixed attempt budget.
    """
    rng = random.Random(seed)
    out = g.out_edges()
    paths: list[list[Event]] = []
    attempts = 0
    max_attempts = 50 * max(n_paths, 1)
    while len(paths) < n_paths and attempts < max_attempts:
        attempts += 1
        node = g.roots[rng.randrange(len(g.roots))]
        path: list[Event] = []
        for _ in range(length):
            choices = out[node]
            if not choices:
                break
            case_idx, dst = choices[rng.randrange(len(choices))]
            path.append(Event(node, case_idx, dst, g.nodes[node].head_pos))
            node = dst
        if len(path) == length:
            paths.append(path)
    return paths


def causal_invariance_sample(g: MultiwayGraph, n_paths: int, seed: int,
                             length: int | None = None) -> InvarianceReport:
    """Sample equal-length paths and compare their causal graphs up to
    isomorphism (canonical labeling)."""
    if length is None:
        length = g.built_depth if g.frontier_open else g.max_layer()
    paths = sample_paths(g, n_paths, length, seed)
    if len(paths) < 2:
        return InvarianceReport("yes", len(paths), length)
    certs = [path_causal_graph(g, p).canonical() for p in paths]
    matches = 0
    mismatch: tuple[int, int] | None = None
    total = 0
    for i in range(len(certs)):
        for j in range(i + 1, len(certs)):
            total += 1
            if certs[i] == certs[j]:
                matches += 1
            elif mismatch is None:
                mismatch = (i, j)
    if matches == total:
        return InvarianceReport("yes", len(paths), length)
    if matches == 0:
        return InvarianceReport("no", len(paths), length, mismatch)
    return InvarianceReport("mixed", len(paths), length, mismatch)
