"""Canonical labeling and isomorphism for small directed graphs.

Individualization-refinement: iteratively recolor nodes by the multiset of
in- and out-neighbor colors until stable; when ties remain, individualize
each member of the first smallest tied class and take the minimum
certificate over the branches. Exponential in the worst case but sized
for the graphs this package produces (a hard cap rejects anything over
10^4 nodes). Parallel edges are respected via neighbor multiplicity.
"""

from __future__ import annotations

from .errors import ResourceLimitError

SIZE_CAP = 10_000

Certificate = tuple


def _refine(n: int, out_adj: list[list[int]], in_adj: list[list[int]],
            colors: list[int]) -> list[int]:
    while True:
        sigs = [(colors[v],
                 tuple(sorted(colors[w] for w in out_adj[v])),
                 tuple(sorted(colors[w] for w in in_adj[v])))
                for v in range(n)]
        ranking = {sig: i for i, sig in enumerate(sorted(set(sigs)))}
        new = [ranking[sigs[v]] for v in range(n)]
        if new == colors:
            return colors
        colors = new


def _first_tied_class(n: int, colors: list[int]) -> list[int]:
    by_color: dict[int, list[int]] = {}
    for v in range(n):
        by_color.setdefault(colors[v], []).append(v)
    tied = [members for members in by_color.values() if len(members) > 1]
    if not tied:
        return []
    return min(tied, key=lambda m: (len(m), colors[m[0]]))


def _certificate(n: int, edges: list[tuple[int, int]], out_adj, in_adj,
                 colors: list[int]) -> Certificate:
    colors = _refine(n, out_adj, in_adj, colors)
    target = _first_tied_class(n, colors)
    if not target:
        order = sorted(range(n), key=lambda v: colors[v])
        pos = [0] * n
        for i, v in enumerate(order):
            pos[v] = i
        return (n, tuple(sorted((pos[u], pos[v]) for u, v in edges)))
    best = None
    bump = max(colors) + 1
    for v in target:
        branch = list(colors)
        branch[v] = bump
        cert = _certificate(n, edges, out_adj, in_adj, branch)
        if best is None or cert < best:
            best = cert
    return best


def canonical_form(n: int, edges: list[tuple[int, int]],
                   colors: list[int] | None = None) -> Certificate:
    """Certificate equal for exactly the (color-respecting) isomorphic graphs."""
    if n > SIZE_CAP:
        raise ResourceLimitError("graph too large for canonical labeling", cap=SIZE_CAP)
    out_adj: list[list[int]] = [[] for _ in range(n)]
    in_adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        out_adj[u].append(v)
        in_adj[v].append(u)
    init = list(colors) if colors is not None else [0] * n
    return _certificate(n, list(edges), out_adj, in_adj, init)


def isomorphic(n_a: int, edges_a: list[tuple[int, int]],
               n_b: int, edges_b: list[tuple[int, int]]) -> bool:
    """Directed-graph isomorphism by canonical-form equality."""
    if n_a != n_b or len(edges_a) != len(edges_b):
        return False
    return canonical_form(n_a, edges_a) == canonical_form(n_b, edges_b)


def rooted_form(n: int, edges: list[tuple[int, int]], root: int) -> Certificate:
    """Canonical form of the graph with one node distinguished."""
    colors = [0] * n
    colors[root] = 1
    return canonical_form(n, edges, colors)


def is_vertex_transitive(n: int, edges: list[tuple[int, int]]) -> bool:
    """True iff some automorphism carries a fixed base node to every node,
    decided by equality of the rooted canonical forms."""
    if n == 0:
        return True
    if n > SIZE_CAP:
        raise ResourceLimitError("graph too large for transitivity check", cap=SIZE_CAP)
    outdeg = [0] * n
    indeg = [0] * n
    for u, v in edges:
        outdeg[u] += 1
        indeg[v] += 1
    if len(set(outdeg)) > 1 or len(set(indeg)) > 1:
        return False
    base = rooted_form(n, edges, 0)
    return all(rooted_form(n, edges, v) == base for v in range(1, n))
