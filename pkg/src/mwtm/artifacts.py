"""Multispace coordinates and byte-stable file exports.

Layout is delegated to external renderers: this module only computes the
coordinate data and writes render-ready plain-text files (DOT, JSON,
edgelist, PGM). All exports are sorted canonically so identical inputs
produce identical bytes, independent of discovery order or worker count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .causal import CausalGraph
from .errors import RuleFormatError
from .finite_tape import Digraph, StateTransitionGraph
from .machine import Configuration, config_sort_key, describe
from .multiway import BranchialGraph, MultiwayGraph, TapeStack
from .rulespace import format_rule

SCHEMA = "mwtm.graph/1"


class Coord(NamedTuple):
    """Multispace coordinates: space x (head position), time t (layer),
    branchial b (log of the tape numeral)."""

    x: int
    t: int
    b: float


def tape_numeral(config: Configuration, k: int) -> int:
    """Tape window (leftmost to rightmost non-blank) read as a base-k
    number, most significant digit leftmost; empty window is 0."""
    if not config.tape:
        return 0
    cells = dict(config.tape)
    lo = min(cells)
    hi = max(cells)
    value = 0
    for pos in range(lo, hi + 1):
        value = value * k + cells.get(pos, 0)
    return value


def _log_base_k_1p(numeral: int, k: int, shift: int = 0) -> float:
    """log_k(1 + numeral * k**shift), safe for huge numerals."""
    if numeral == 0:
        return 0.0
    log_k = math.log(k)
    magnitude = math.log(numeral) + shift * log_k
    if magnitude > 40:  # 1 + x ~ x far beyond float precision
        return magnitude / log_k
    return math.log1p(math.exp(magnitude)) / log_k


def assign_multispace(g: MultiwayGraph, radix_at_head: bool = False) -> list[Coord]:
    """Per-node coordinates, indexed by node id.

    With ``radix_at_head`` the numeral's radix point moves to the head
    position (off by default; the head is already the spatial coordinate).
    """
    k = g.rule.k
    coords = []
    for node, layer in zip(g.nodes, g.layers):
        numeral = tape_numeral(node, k)
        shift = 0
        if radix_at_head and node.tape:
            hi = max(p for p, _ in node.tape)
            shift = node.head_pos - hi
        coords.append(Coord(node.head_pos, layer, _log_base_k_1p(numeral, k, shift)))
    return coords


# --- generic graph document ---

@dataclass
class GraphDocument:
    """Format-neutral graph payload; ``data`` round-trips JSON losslessly."""

    data: dict

    @property
    def graph_type(self) -> str:
        return self.data["type"]

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, separators=(",", ":")) + "\n"


def _tape_payload(config) -> list:
    if isinstance(config.tape, tuple) and config.tape and isinstance(config.tape[0], int):
        return list(config.tape)  # dense finite tape
    return [[p, c] for p, c in config.tape]


def document(graph, include_multispace: bool = True) -> GraphDocument:
    """Build the canonical document for any graph the package produces."""
    if isinstance(graph, MultiwayGraph):
        return _multiway_document(graph, include_multispace)
    if isinstance(graph, StateTransitionGraph):
        return _stg_document(graph)
    if isinstance(graph, CausalGraph):
        return _causal_document(graph)
    if isinstance(graph, BranchialGraph):
        return _branchial_document(graph)
    if isinstance(graph, Digraph):
        return GraphDocument({
            "schema": SCHEMA, "type": "digraph",
            "nodes": [{"id": i} for i in range(graph.num_nodes)],
            "edges": [{"src": u, "dst": v} for u, v in sorted(graph.edges)]})
    raise TypeError(f"cannot export {type(graph).__name__}")


def _multiway_document(g: MultiwayGraph, include_multispace: bool) -> GraphDocument:
    order = sorted(range(len(g.nodes)),
                   key=lambda i: (g.layers[i], config_sort_key(g.nodes[i])))
    remap = {old: new for new, old in enumerate(order)}
    coords = assign_multispace(g) if include_multispace else None
    nodes = []
    for new_id, old in enumerate(order):
        cfg = g.nodes[old]
        node = {"id": new_id, "state": cfg.head_state, "pos": cfg.head_pos,
                "tape": _tape_payload(cfg), "layer": g.layers[old],
                "halting": g.halting[old]}
        if coords is not None:
            node["x"] = coords[old].x
            node["t"] = coords[old].t
            node["b"] = coords[old].b
        nodes.append(node)
    edges = sorted((remap[src], case, remap[dst]) for src, case, dst in set(g.edges))
    return GraphDocument({
        "schema": SCHEMA, "type": "multiway",
        "rule": format_rule(g.rule, "hex"),
        "frontierOpen": g.frontier_open, "builtDepth": g.built_depth,
        "roots": sorted(remap[r] for r in g.roots),
        "nodes": nodes,
        "edges": [{"src": s, "case": c, "dst": d} for s, c, d in edges]})


def _stg_document(stg: StateTransitionGraph) -> GraphDocument:
    nodes = []
    for index in range(stg.num_nodes):
        cfg = stg.config(index)
        nodes.append({"id": index, "state": cfg.head_state, "pos": cfg.head_pos,
                      "tape": list(cfg.tape), "halting": stg.halting(index)})
    edges = sorted(stg.edges)
    return GraphDocument({
        "schema": SCHEMA, "type": "state-transition",
        "rule": format_rule(stg.rule, "hex"), "n": stg.n, "boundary": stg.boundary,
        "nodes": nodes,
        "edges": [{"src": s, "case": c, "dst": d} for s, c, d in edges]})


def _causal_document(cg: CausalGraph) -> GraphDocument:
    nodes = [{"id": i, "src": e.src, "case": e.case_index, "dst": e.dst,
              "readPos": e.read_pos} for i, e in enumerate(cg.events)]
    return GraphDocument({
        "schema": SCHEMA, "type": "causal",
        "initEdges": list(cg.init_edges),
        "nodes": nodes,
        "edges": [{"src": u, "dst": v} for u, v in sorted(cg.edges)]})


def _branchial_document(bg: BranchialGraph) -> GraphDocument:
    return GraphDocument({
        "schema": SCHEMA, "type": "branchial",
        "slice": bg.slice_index, "tau": bg.tau,
        "nodes": [{"id": v} for v in bg.vertices],
        "edges": [{"a": a, "b": b} for a, b in bg.edges],
        "hyperedges": [list(h) for h in bg.hyperedges]})


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(doc: GraphDocument) -> str:
    directed = doc.graph_type != "branchial"
    arrow = "->" if directed else "--"
    lines = [("digraph" if directed else "graph") + " mwtm {"]
    for node in doc.data["nodes"]:
        attrs = []
        if "state" in node:
            tape = node["tape"]
            if tape and isinstance(tape[0], list):
                cells = ", ".join(f"{p}:{c}" for p, c in tape)
                label = f"s{node['state']}@{node['pos']} {{{cells}}}"
            else:
                label = f"s{node['state']}@{node['pos']} " + \
                    "".join(str(c) for c in tape)
            attrs.append(f"label={_dot_quote(label)}")
        elif "src" in node:
            attrs.append("label=" + _dot_quote("e%d" % node["id"]))
        if "layer" in node:
            attrs.append(f"layer={node['layer']}")
        if node.get("halting"):
            attrs.append("halting=true")
        lines.append(f"  n{node['id']} [{', '.join(attrs)}];" if attrs
                     else f"  n{node['id']};")
    for edge in doc.data["edges"]:
        if "a" in edge:
            lines.append(f"  n{edge['a']} {arrow} n{edge['b']};")
        elif "case" in edge:
            lines.append(f"  n{edge['src']} {arrow} n{edge['dst']} "
                         f"[label=\"{edge['case']}\"];")
        else:
            lines.append(f"  n{edge['src']} {arrow} n{edge['dst']};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_edgelist(doc: GraphDocument) -> str:
    lines = []
    for edge in doc.data["edges"]:
        if "a" in edge:
            lines.append(f"{edge['a']} {edge['b']}")
        else:
            case = edge.get("case", "-")
            lines.append(f"{edge['src']} {case} {edge['dst']}")
    return "\n".join(lines) + "\n"


FORMATS = ("json", "dot", "edgelist")


def render(graph_or_doc, fmt: str) -> str:
    doc = graph_or_doc if isinstance(graph_or_doc, GraphDocument) \
        else document(graph_or_doc)
    if fmt == "json":
        return doc.to_json()
    if fmt == "dot":
        return to_dot(doc)
    if fmt == "edgelist":
        return to_edgelist(doc)
    raise ValueError(f"unknown format {fmt!r} (expected one of {FORMATS})")


def export_graph(graph_or_doc, fmt: str, path: str) -> None:
    text = render(graph_or_doc, fmt)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def import_graph(path: str) -> GraphDocument:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("schema") != SCHEMA:
        raise RuleFormatError(f"unsupported graph schema {data.get('schema')!r}")
    return GraphDocument(data)


# --- raster output ---

def _quantize(value: Fraction | int, scale: int) -> int:
    if scale <= 0:
        return 0
    scaled = Fraction(value) * 255 / scale
    return int(scaled + Fraction(1, 2))  # round half up, exact


def export_raster(matrix: Sequence[Sequence], path: str, scale: int = 1,
                  halted_rows: Iterable[int] = ()) -> None:
    """ASCII PGM (P2, maxval 255) of a matrix of rationals in [0, scale].

    Halted rows render at half intensity (floor of the normal value / 2).
    """
    rows = [list(r) for r in matrix]
    if not rows:
        raise ValueError("matrix must have at least one row")
    width = max(len(r) for r in rows)
    halted = set(halted_rows)
    lines = ["P2", f"{width} {len(rows)}", "255"]
    for i, row in enumerate(rows):
        values = []
        for j in range(width):
            v = _quantize(row[j], scale) if j < len(row) else 0
            if i in halted:
                v //= 2
            values.append(str(v))
        lines.append(" ".join(values))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def stack_matrix(stack: TapeStack) -> tuple[list[list[int]], list[int]]:
    """Tape-stack rows as a color matrix plus the halted row indexes."""
    matrix = [list(row.colors) for row in stack.rows]
    halted = [i for i, row in enumerate(stack.rows) if row.halted]
    return matrix, halted
