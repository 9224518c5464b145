from __future__ import annotations

import pytest

from mwtm import LEFT, RIGHT, Rule, make_rule


@pytest.fixture
def three_case_rule() -> Rule:
    """The reference conformance rule: {(1,1)->(1,0,L), (1,0)->(1,0,L),
    (1,0)->(1,1,R)}. Branches on a blank read, never halts."""
    return make_rule(1, 2, [(1, 1, 1, 0, LEFT), (1, 0, 1, 0, LEFT),
                            (1, 0, 1, 1, RIGHT)])


@pytest.fixture
def random_walk_rule() -> Rule:
    """s=1, k=1 two-case rule: the head random-walks, writing nothing."""
    return make_rule(1, 1, [(1, 0, 1, 0, LEFT), (1, 0, 1, 0, RIGHT)])


@pytest.fixture
def bb_survivor_rule() -> Rule:
    """Deterministic-incomplete s=2,k=2 rule that halts after 5 applications
    from blank, the longest possible; its case for (2,1) is omitted."""
    return make_rule(2, 2, [(1, 0, 2, 1, RIGHT), (1, 1, 2, 1, LEFT),
                            (2, 0, 1, 1, LEFT)])


@pytest.fixture
def two_halt_rule() -> Rule:
    """Branches immediately into two distinct halting states."""
    return make_rule(2, 2, [(1, 0, 2, 1, RIGHT), (1, 0, 2, 0, LEFT)])
