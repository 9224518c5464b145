from __future__ import annotations

import itertools
from math import comb

import pytest

from mwtm import (LEFT, RIGHT, Case, bitmask_of, case_index, classify,
                  enumerate_rules, format_rule, index_to_case, make_rule,
                  parse_rule, reflect, reflect_bitmask, rule_from_bitmask,
                  universe_size)
from mwtm.errors import RuleFormatError
from mwtm.rulespace import reflection_orbit_rep, unrank_bitmask


def test_universe_sizes():
    assert universe_size(2, 2) == 32
    assert universe_size(1, 2) == 8
    assert universe_size(3, 3) == 162


def test_index_zero_is_the_left_blank_stayer():
    assert index_to_case(0, 2, 2) == Case(1, 0, 1, 0, LEFT)


def test_case_index_round_trip_s3k3():
    for i in range(universe_size(3, 3)):
        case = index_to_case(i, 3, 3)
        assert case_index(case, 3, 3) == i


def test_index_to_case_range_check():
    with pytest.raises(RuleFormatError):
        index_to_case(8, 1, 2)


def test_index_order_matches_case_order():
    cases = [index_to_case(i, 2, 2) for i in range(32)]
    assert cases == sorted(cases)


def test_enumerate_rule_counts():
    assert sum(1 for _ in enumerate_rules(2, 2, 2)) == 496
    assert sum(1 for _ in enumerate_rules(1, 2, 3)) == 56
    assert sum(1 for _ in enumerate_rules(1, 2, 4)) == 70


def test_enumerate_counts_small_universes_all_p():
    for s, k in ((1, 1), (1, 2), (2, 1)):
        n = universe_size(s, k)
        for p in range(1, n + 1):
            assert sum(1 for _ in enumerate_rules(s, k, p)) == comb(n, p)


def test_enumerate_ascending_and_unique():
    seen = [rid.bitmask for rid in enumerate_rules(1, 2, 3)]
    assert seen == sorted(set(seen))
    assert all(bin(bm).count("1") == 3 for bm in seen)


def test_unrank_matches_enumeration():
    masks = [rid.bitmask for rid in enumerate_rules(1, 2, 3)]
    for rank in (0, 1, 17, 55):
        assert unrank_bitmask(8, 3, rank) == masks[rank]
    with pytest.raises(ValueError):
        unrank_bitmask(8, 3, 56)


def test_bitmask_round_trip():
    rule = make_rule(2, 2, [(1, 0, 2, 1, RIGHT), (2, 1, 1, 0, LEFT)])
    assert rule_from_bitmask(2, 2, bitmask_of(rule)) == rule


def test_classification_counts_s2k2_p2():
    multiway = sum(1 for rid in enumerate_rules(2, 2, 2)
                   if classify(rule_from_bitmask(2, 2, rid.bitmask)).tag == "multiway")
    assert multiway == 112


def test_classification_counts_s1k2():
    # all 256 subsets, empty rule included (deterministic-incomplete)
    non_det = 0
    for bm in range(256):
        rule = rule_from_bitmask(1, 2, bm)
        if classify(rule).some_input_repeated:
            non_det += 1
    assert non_det == 231

    p2_multiway = sum(1 for rid in enumerate_rules(1, 2, 2)
                      if classify(rule_from_bitmask(1, 2, rid.bitmask)).tag == "multiway")
    assert p2_multiway == 12

    for rid in enumerate_rules(1, 2, 3):  # only 2 inputs exist: p=3 must branch
        assert classify(rule_from_bitmask(1, 2, rid.bitmask)).tag == "multiway"


def test_classify_flags():
    complete = make_rule(1, 2, [(1, 0, 1, 1, RIGHT), (1, 1, 1, 0, LEFT)])
    assert classify(complete) == ("deterministic-complete", True, False)
    empty = make_rule(1, 2, [])
    assert classify(empty).tag == "deterministic-incomplete"


def test_reflect_involution_sample():
    for rid in itertools.islice(enumerate_rules(2, 2, 3), 0, 4960, 7):
        rule = rule_from_bitmask(2, 2, rid.bitmask)
        assert reflect(reflect(rule)) == rule
        assert classify(reflect(rule)) == classify(rule)


def test_reflect_example(three_case_rule):
    mirrored = reflect(three_case_rule)
    assert set(mirrored.cases) == {Case(1, 1, 1, 0, RIGHT), Case(1, 0, 1, 0, RIGHT),
                                   Case(1, 0, 1, 1, LEFT)}


def test_reflect_bitmask_agrees_with_reflect():
    for rid in itertools.islice(enumerate_rules(2, 2, 2), 0, 496, 5):
        rule = rule_from_bitmask(2, 2, rid.bitmask)
        assert reflect_bitmask(rid.bitmask, 2, 2) == bitmask_of(reflect(rule))
    assert reflection_orbit_rep(0b10, 1, 1) == reflection_orbit_rep(0b01, 1, 1)


def test_parse_rule_long_form():
    rule = parse_rule('tm s=2 k=2 cases="1,0->1,1,R; 1,1->2,0,L"')
    assert rule.s == 2 and rule.k == 2
    assert set(rule.cases) == {Case(1, 0, 1, 1, RIGHT), Case(1, 1, 2, 0, LEFT)}


def test_parse_rule_compact_and_hex(three_case_rule):
    text = format_rule(three_case_rule, "hex")
    assert parse_rule(text) == three_case_rule
    assert parse_rule(format_rule(three_case_rule)) == three_case_rule


def test_parse_rule_single_quotes():
    rule = parse_rule("tm s1k2 cases='1,1->1,0,L; 1,0->1,0,L; 1,0->1,1,R'")
    assert rule.p == 3 and rule.s == 1 and rule.k == 2


def test_parse_errors_carry_positions():
    with pytest.raises(RuleFormatError) as err:
        parse_rule('tm s=1 k=2 cases="1,0->1,1,X"')
    assert "position" in str(err.value)
    with pytest.raises(RuleFormatError):
        parse_rule("machine s=1 k=2 #ff")
    with pytest.raises(RuleFormatError):
        parse_rule("tm s=1 k=2")
