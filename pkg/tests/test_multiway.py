from __future__ import annotations

import random
from fractions import Fraction
from math import comb

import pytest

from mwtm import (LEFT, RIGHT, BLANK_CONFIG, TerminationClass, branchial, build,
                  extend, head_weight_distribution, make_config, make_rule,
                  path_weights, rule_from_bitmask, state_count_sequence,
                  tape_stack, termination_class)
from mwtm.errors import DepthInsufficientError, ResourceLimitError
from mwtm.multiway import averaged_overlay
from mwtm.rulespace import enumerate_rules

import oracles

# The reference rule's first seven states, in origin-0 coordinates: the
# initial blank state, its two step-1 successors, and four step-2 states.
SEVEN_STATES = {
    make_config(1, 0),
    make_config(1, -1),
    make_config(1, 1, {0: 1}),
    make_config(1, -2),
    make_config(1, 0, {-1: 1}),
    make_config(1, 0, {0: 1}),
    make_config(1, 2, {0: 1, 1: 1}),
}


def test_reference_seven_states(three_case_rule):
    g = build(three_case_rule, [BLANK_CONFIG], 2)
    assert set(g.nodes) == SEVEN_STATES
    assert len(g) == 7


def test_state_count_sequence_reference(three_case_rule):
    assert state_count_sequence(three_case_rule, [BLANK_CONFIG], 2) == [1, 3, 7]


def test_layers_are_first_reach(three_case_rule):
    g = build(three_case_rule, [BLANK_CONFIG], 4)
    layers = oracles.min_layers(three_case_rule, [BLANK_CONFIG], 4)
    assert {g.nodes[i]: g.layers[i] for i in range(len(g))} == layers


def test_deterministic_rule_is_a_path():
    rule = make_rule(2, 2, [(1, 0, 2, 1, RIGHT), (2, 0, 1, 0, RIGHT),
                            (2, 1, 1, 1, RIGHT), (1, 1, 2, 0, RIGHT)])
    g = build(rule, [BLANK_CONFIG], 6)
    out = g.out_edges()
    for i in range(len(g)):
        if not g.halting[i] and i not in g._unexpanded:
            assert len(out[i]) == 1


def test_random_walk_node_counts(random_walk_rule):
    # With merging, position p is first reached at depth |p|: the graph
    # built to depth t has exactly 2t+1 nodes and slices {-t, +t}.
    for t in (1, 2, 5):
        g = build(random_walk_rule, [BLANK_CONFIG], t)
        assert len(g) == 2 * t + 1
        assert sorted(g.nodes[i].head_pos for i in g.slice_ids(t)) == \
            ([-t, t] if t else [0])
        layers = oracles.min_layers(random_walk_rule, [BLANK_CONFIG], t)
        assert len(layers) == len(g)


def test_node_cap_reports_cap_and_depth(three_case_rule):
    with pytest.raises(ResourceLimitError) as err:
        build(three_case_rule, [BLANK_CONFIG], 30, max_nodes=20)
    assert err.value.cap == 20
    assert err.value.depth is not None


def test_termination_classes(three_case_rule, two_halt_rule):
    assert termination_class(build(three_case_rule, [BLANK_CONFIG], 10)) == \
        TerminationClass.OPEN_AT_DEPTH

    no_blank_case = make_rule(1, 2, [(1, 1, 1, 0, LEFT)])
    g = build(no_blank_case, [BLANK_CONFIG], 5)
    assert termination_class(g) == TerminationClass.CLOSED_ALL_HALT
    assert len(g) == 1

    looper = make_rule(2, 2, [(1, 0, 2, 0, RIGHT), (2, 0, 1, 0, LEFT)])
    g = build(looper, [BLANK_CONFIG], 10)
    assert termination_class(g) == TerminationClass.CLOSED_WITH_CYCLES
    assert g.is_closed

    g = build(two_halt_rule, [BLANK_CONFIG], 5)
    assert termination_class(g) == TerminationClass.CLOSED_ALL_HALT
    assert sum(g.halting) == 2


def test_path_weights_start_and_oracle(three_case_rule):
    g = build(three_case_rule, [BLANK_CONFIG], 4)
    w0 = path_weights(g, 0)
    assert w0.weights == {0: 1}

    counts = oracles.path_count_by_config(three_case_rule, BLANK_CONFIG, 3)
    w3 = path_weights(g, 3)
    assert {g.nodes[i]: w for i, w in w3.weights.items()} == dict(counts)
    assert sum(w3.weights.values()) == sum(counts.values())


def test_path_weights_depth_guard(three_case_rule):
    g = build(three_case_rule, [BLANK_CONFIG], 3)
    with pytest.raises(DepthInsufficientError):
        path_weights(g, 4)


def test_random_walk_binomial(random_walk_rule):
    g = build(random_walk_rule, [BLANK_CONFIG], 20)
    for t in range(21):
        dist = head_weight_distribution(g, t)
        total = sum(dist.values())
        assert total == 2 ** t
        for offset, weight in dist.items():
            rights = (t + offset) // 2
            assert Fraction(weight, total) == Fraction(comb(t, rights), 2 ** t)


def test_branchial_deterministic_empty():
    rule = make_rule(2, 2, [(1, 0, 2, 1, RIGHT), (2, 0, 1, 0, LEFT),
                            (2, 1, 1, 1, RIGHT), (1, 1, 2, 1, LEFT)])
    g = build(rule, [BLANK_CONFIG], 6)
    for t in range(1, min(6, g.max_layer()) + 1):
        if g.slice_ids(t):
            assert branchial(g, t).edges == ()


def test_branchial_random_walk_dedup_slices(random_walk_rule):
    # Slice 2 is {-2, +2} (0 merged into the root), whose members share no
    # parent, so the immediate branchial graph is empty; two steps back they
    # share the root, giving one hyperedge.
    g = build(random_walk_rule, [BLANK_CONFIG], 4)
    b1 = branchial(g, 2)
    assert [g.nodes[v].head_pos for v in b1.vertices] == [-2, 2]
    assert b1.edges == ()
    b2 = branchial(g, 2, tau=2)
    assert len(b2.hyperedges) == 1
    assert sorted(g.nodes[v].head_pos for v in b2.hyperedges[0]) == [-2, 2]


def test_branchial_against_oracle(three_case_rule):
    g = build(three_case_rule, [BLANK_CONFIG], 4)
    for t, tau in ((2, 1), (3, 1), (3, 2), (4, 2)):
        got = branchial(g, t, tau)
        pairs = {frozenset((g.nodes[a], g.nodes[b])) for a, b in got.edges}
        assert pairs == oracles.branchial_pairs(three_case_rule, BLANK_CONFIG,
                                                4, t, tau)


def test_branchial_projection_and_symmetry(three_case_rule):
    g = build(three_case_rule, [BLANK_CONFIG], 4)
    b = branchial(g, 3, tau=1)
    assert all(a < bb for a, bb in b.edges)  # irreflexive, normalized pairs
    projected = set()
    for h in b.hyperedges:
        for i in range(len(h)):
            for j in range(i + 1, len(h)):
                projected.add((h[i], h[j]))
    assert projected == set(b.edges)


def test_extend_equals_fresh_build(three_case_rule):
    g1 = build(three_case_rule, [BLANK_CONFIG], 3)
    extend(g1, 3)
    g2 = build(three_case_rule, [BLANK_CONFIG], 6)
    assert g1.nodes == g2.nodes
    assert g1.layers == g2.layers
    assert g1.edges == g2.edges
    assert g1.frontier_open == g2.frontier_open


def _sample_rules(count, seed=11):
    rng = random.Random(seed)
    rules = []
    pool = list(enumerate_rules(2, 2, 3))
    for rid in rng.sample(pool, count):
        rules.append(rule_from_bitmask(2, 2, rid.bitmask))
    return rules


def test_layer_monotonicity_random_rules():
    for rule in _sample_rules(12):
        g = build(rule, [BLANK_CONFIG], 6, max_nodes=5000)
        inc = g.in_edges()
        for v in range(len(g)):
            if v in g.roots:
                continue
            sources = [g.layers[u] for _, u in inc[v]]
            assert all(g.layers[v] <= lu + 1 for lu in sources)
            assert g.layers[v] - 1 in sources  # some first-reach parent


def test_merging_soundness_random_rules(random_walk_rule):
    # nodes first reached at depth t each need their own length-t path
    for rule in _sample_rules(8):
        g = build(rule, [BLANK_CONFIG], 5, max_nodes=5000)
        for t in range(min(5, g.built_depth) + 1):
            assert len(g.slice_ids(t)) <= sum(path_weights(g, t).weights.values())
    # strict once paths converge: the random walk merges back onto old nodes
    g = build(random_walk_rule, [BLANK_CONFIG], 4)
    assert len(g.slice_ids(2)) < sum(path_weights(g, 2).weights.values())


def test_tape_stack_blank_root(three_case_rule):
    stack = tape_stack(build(three_case_rule, [BLANK_CONFIG], 0), 0)
    assert len(stack.rows) == 1
    assert stack.rows[0].colors == (0,)
    assert not stack.rows[0].halted


def test_tape_stack_reference_slice_two(three_case_rule):
    g = build(three_case_rule, [BLANK_CONFIG], 2)
    stack = tape_stack(g, 2)
    assert (stack.lo, stack.hi) == (-2, 2)
    rows = [(r.colors, r.head_pos) for r in stack.rows]
    assert rows == [
        ((0, 0, 0, 0, 0), -2),
        ((0, 1, 0, 0, 0), 0),
        ((0, 0, 1, 0, 0), 0),
        ((0, 0, 1, 1, 0), 2),
    ]
    assert not any(r.halted for r in stack.rows)


def test_overlay_exact_rationals(three_case_rule):
    g = build(three_case_rule, [BLANK_CONFIG], 2)
    overlays = averaged_overlay(g)
    assert overlays[0].mean_colors == (Fraction(0),)
    layer2 = overlays[2]
    idx = 0 - layer2.lo  # column of absolute position 0
    assert layer2.mean_colors[idx] == Fraction(1, 2)  # two of four rows have 1 at 0


def test_overlay_head_density_weighted(random_walk_rule):
    # rows weighted by path counts: slice 4 holds the two extreme walks,
    # one length-4 path each, so the density splits evenly between them
    g = build(random_walk_rule, [BLANK_CONFIG], 6)
    weights = path_weights(g, 4).weights
    layer4 = averaged_overlay(g, weights)[4]
    density = {layer4.lo + col: d for col, d in enumerate(layer4.head_density) if d}
    assert density == {-4: Fraction(1, 2), 4: Fraction(1, 2)}
