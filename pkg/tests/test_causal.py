from __future__ import annotations

import random

import pytest

from mwtm import (LEFT, RIGHT, BLANK_CONFIG, build, causal_graph,
                  causal_invariance_sample, confluence_bounded, events,
                  make_rule, path_causal_graph, rule_from_bitmask)
from mwtm.causal import Event, sample_paths
from mwtm.errors import NonComposablePathError
from mwtm.rulespace import enumerate_rules

import oracles


def test_events_match_edges(three_case_rule):
    g = build(three_case_rule, [BLANK_CONFIG], 2)
    evs = events(g)
    assert len(evs) == len(g.edges)
    assert len({(e.src, e.case_index) for e in evs}) == len(evs)
    for e in evs:
        assert e.read_pos == g.nodes[e.src].head_pos


def test_single_event_rule():
    rule = make_rule(2, 2, [(1, 0, 2, 1, RIGHT)])
    g = build(rule, [BLANK_CONFIG], 5)
    assert len(events(g)) == 1


def test_deterministic_survivor_event_path(bb_survivor_rule):
    # 5 applications before the missing (2,1) input is reached
    g = build(bb_survivor_rule, [BLANK_CONFIG], 10)
    evs = events(g)
    assert len(evs) == 5
    assert g.is_closed
    cg = causal_graph(g)
    assert not cg.has_cycles()
    # deterministic: the causal graph equals its single path's causal graph
    path = sorted(evs, key=lambda e: g.layers[e.src])
    pcg = path_causal_graph(g, path)
    assert _edge_keys(pcg) == _edge_keys(cg)


def _edge_keys(cg) -> set:
    return {((cg.events[a].src, cg.events[a].case_index),
             (cg.events[b].src, cg.events[b].case_index)) for a, b in cg.edges}


def test_two_event_chain_single_edge():
    rule = make_rule(2, 2, [(1, 0, 2, 1, RIGHT), (2, 0, 1, 1, LEFT)])
    g = build(rule, [BLANK_CONFIG], 5)
    cg = causal_graph(g)
    assert len(cg.events) == 2
    assert len(cg.edges) == 1


def test_causal_graph_against_path_oracle(three_case_rule):
    g = build(three_case_rule, [BLANK_CONFIG], 3)
    cg = causal_graph(g)
    got = {((g.nodes[cg.events[a].src], cg.events[a].case_index),
            (g.nodes[cg.events[b].src], cg.events[b].case_index))
           for a, b in cg.edges}
    expected = oracles.causal_edges_by_paths(three_case_rule, BLANK_CONFIG, 3)
    assert got == expected


def test_init_edges_off_by_default(three_case_rule):
    g = build(three_case_rule, [BLANK_CONFIG], 2)
    assert causal_graph(g).init_edges == ()
    with_init = causal_graph(g, include_init=True)
    assert 0 in with_init.init_edges  # the root events read unwritten cells


def test_path_causal_graph_trivial_and_errors(three_case_rule):
    g = build(three_case_rule, [BLANK_CONFIG], 3)
    evs = events(g)
    root_events = [e for e in evs if e.src == g.roots[0]]
    single = path_causal_graph(g, [root_events[0]])
    assert len(single) == 1 and single.edges == ()

    with pytest.raises(NonComposablePathError):
        path_causal_graph(g, [root_events[0], root_events[0]])
    non_root = [e for e in evs if e.src not in g.roots][0]
    with pytest.raises(NonComposablePathError):
        path_causal_graph(g, [non_root])


def test_random_walk_all_left_path_is_a_chain(random_walk_rule):
    g = build(random_walk_rule, [BLANK_CONFIG], 5)
    out = g.out_edges()
    path = []
    node = g.roots[0]
    for _ in range(4):
        case_idx, dst = min((ci, d) for ci, d in out[node]
                            if g.nodes[d].head_pos < g.nodes[node].head_pos)
        path.append(Event(node, case_idx, dst, g.nodes[node].head_pos))
        node = dst
    pcg = path_causal_graph(g, path)
    # every read is a never-written blank: only head-token edges, a 4-chain
    assert pcg.edges == ((0, 1), (1, 2), (2, 3))


def test_path_subgraph_property(three_case_rule):
    g = build(three_case_rule, [BLANK_CONFIG], 6)
    mcg_keys = _edge_keys(causal_graph(g))
    for path in sample_paths(g, 100, 6, seed=3):
        pcg = path_causal_graph(g, path)
        assert _edge_keys(pcg) <= mcg_keys


def test_path_subgraph_property_random_rules():
    rng = random.Random(23)
    pool = list(enumerate_rules(2, 2, 4))
    checked = 0
    for rid in rng.sample(pool, 40):
        rule = rule_from_bitmask(2, 2, rid.bitmask)
        g = build(rule, [BLANK_CONFIG], 5, max_nodes=4000)
        if len(g.edges) == 0:
            continue
        mcg_keys = _edge_keys(causal_graph(g))
        for path in sample_paths(g, 10, min(4, g.built_depth), seed=rid.bitmask):
            assert _edge_keys(path_causal_graph(g, path)) <= mcg_keys
        checked += 1
        if checked == 10:
            break
    assert checked == 10


def test_confluence_deterministic_trivial():
    rule = make_rule(2, 2, [(1, 0, 2, 1, RIGHT), (2, 0, 1, 0, LEFT),
                            (1, 1, 2, 0, RIGHT), (2, 1, 1, 1, LEFT)])
    verdict = confluence_bounded(rule, [BLANK_CONFIG], 6)
    assert verdict.kind == "confluent"
    assert verdict.depth == 6


def test_confluence_two_halts_counterexample(two_halt_rule):
    verdict = confluence_bounded(two_halt_rule, [BLANK_CONFIG], 4)
    assert verdict.kind == "counterexample"
    assert verdict.witness is not None


def test_confluence_random_walk(random_walk_rule):
    assert confluence_bounded(random_walk_rule, [BLANK_CONFIG], 6).kind == "confluent"


def test_confluence_reference_rule_inconclusive(three_case_rule):
    # branches that never halt and keep growing stay unresolved at depth
    verdict = confluence_bounded(three_case_rule, [BLANK_CONFIG], 4)
    assert verdict.kind in ("inconclusive", "confluent")


def test_invariance_deterministic(bb_survivor_rule):
    g = build(bb_survivor_rule, [BLANK_CONFIG], 10)
    report = causal_invariance_sample(g, 10, seed=1, length=5)
    assert report.isomorphic == "yes"


def test_invariance_mixed_on_counterexample_rule():
    rule = make_rule(2, 2, [(1, 0, 2, 1, RIGHT), (1, 0, 1, 1, RIGHT),
                            (2, 0, 2, 0, RIGHT)])
    g = build(rule, [BLANK_CONFIG], 6, max_nodes=4000)
    report = causal_invariance_sample(g, 30, seed=5, length=4)
    assert report.isomorphic in ("mixed", "no")
    assert report.witness is not None


def test_invariance_deterministic_given_seed(three_case_rule):
    g = build(three_case_rule, [BLANK_CONFIG], 6)
    a = causal_invariance_sample(g, 20, seed=9)
    b = causal_invariance_sample(g, 20, seed=9)
    assert a == b
