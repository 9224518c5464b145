"""Case-universe indexing, rule enumeration, classification, and symmetry.

For a machine size (s, k) there are 2*s^2*k^2 possible cases; a rule is a
subset of them, so rules are identified bijectively with bitmask integers
below 2^(2*s^2*k^2). Bit i corresponds to the i-th case in canonical
lexicographic order, so bit 0 is (1,0)->(1,0,L).

The text notation (consumed and produced bit-exactly by the CLI) is

    tm s=2 k=2 cases="1,0->1,1,R; 1,1->2,0,L"
    tm s2k2 #<hex bitmask>

with R = +1 and L = -1.
"""

from __future__ import annotations

import re
from math import comb
from typing import Iterator, NamedTuple

from .errors import RuleFormatError
from .machine import LEFT, RIGHT, Case, Rule


def universe_size(s: int, k: int) -> int:
    return 2 * s * s * k * k


def case_index(case: Case, s: int, k: int) -> int:
    """Position of the case in canonical lexicographic order."""
    move_bit = 0 if case.move == LEFT else 1
    return ((((case.s_in - 1) * k + case.c_in) * s + (case.s_out - 1)) * k
            + case.c_out) * 2 + move_bit


def index_to_case(index: int, s: int, k: int) -> Case:
    n = universe_size(s, k)
    if not 0 <= index < n:
        raise RuleFormatError(f"case index {index} out of range [0, {n})")
    index, move_bit = divmod(index, 2)
    index, c_out = divmod(index, k)
    index, s_out0 = divmod(index, s)
    s_in0, c_in = divmod(index, k)
    return Case(s_in0 + 1, c_in, s_out0 + 1, c_out, RIGHT if move_bit else LEFT)


def all_cases(s: int, k: int) -> list[Case]:
    return [index_to_case(i, s, k) for i in range(universe_size(s, k))]


class RuleId(NamedTuple):
    """Census identity of a rule: machine size plus the case bitmask."""

    s: int
    k: int
    bitmask: int

    @property
    def p(self) -> int:
        return bin(self.bitmask).count("1")


def rule_from_bitmask(s: int, k: int, bitmask: int) -> Rule:
    n = universe_size(s, k)
    if not 0 <= bitmask < (1 << n):
        raise RuleFormatError(f"bitmask {bitmask:#x} out of range for {n}-case universe")
    cases = tuple(index_to_case(i, s, k) for i in range(n) if bitmask >> i & 1)
    return Rule(s, k, cases)


def bitmask_of(rule: Rule) -> int:
    mask = 0
    for case in rule.cases:
        mask |= 1 << case_index(case, rule.s, rule.k)
    return mask


def rule_id_of(rule: Rule) -> RuleId:
    return RuleId(rule.s, rule.k, bitmask_of(rule))


def enumerate_rules(s: int, k: int, p: int) -> Iterator[RuleId]:
    """All C(2s^2k^2, p) rules with exactly p cases, ascending bitmask order.

    Uses Gosper's hack to walk same-popcount integers in numeric order.
    """
    n = universe_size(s, k)
    if not 0 < p <= n:
        raise RuleFormatError(f"need 0 < p <= {n}, got p={p}")
    v = (1 << p) - 1
    limit = 1 << n
    while v < limit:
        yield RuleId(s, k, v)
        low = v & -v
        ripple = v + low
        v = ripple | (((v ^ ripple) >> 2) // low)


def unrank_bitmask(n: int, p: int, rank: int) -> int:
    """The rank-th (0-based) popcount-p integer below 2^n, ascending.

    Inverse of the combinatorial number system: ascending numeric order of
    fixed-popcount integers is colex order of their bit sets, so the
    bitmask with rank r has highest bit c where C(c, p) <= r is maximal,
    and so on down.
    """
    if not 0 <= rank < comb(n, p):
        raise ValueError(f"rank {rank} out of range for C({n},{p})")
    mask = 0
    r = rank
    for i in range(p, 0, -1):
        c = i - 1
        while comb(c + 1, i) <= r:
            c += 1
        mask |= 1 << c
        r -= comb(c, i)
    return mask


class RuleClass(NamedTuple):
    """Structural classification of a rule by its case inputs."""

    tag: str  # deterministic-complete | deterministic-incomplete | multiway
    every_input_covered: bool  # no branch of the evolution can ever halt
    some_input_repeated: bool  # branching is possible


def classify(rule: Rule) -> RuleClass:
    """Deterministic iff every input occurs at most once; complete iff exactly once."""
    inputs = [c.input for c in rule.cases]
    distinct = set(inputs)
    covered = len(distinct) == rule.s * rule.k
    repeated = len(inputs) != len(distinct)
    if repeated:
        tag = "multiway"
    elif covered:
        tag = "deterministic-complete"
    else:
        tag = "deterministic-incomplete"
    return RuleClass(tag, covered, repeated)


def reflect(rule: Rule) -> Rule:
    """Mirror the rule left-right by negating every move; an involution."""
    return Rule(rule.s, rule.k,
                tuple(Case(c.s_in, c.c_in, c.s_out, c.c_out, -c.move) for c in rule.cases))


def reflect_bitmask(bitmask: int, s: int, k: int) -> int:
    """reflect() on the bitmask encoding: swap each (L, R) bit pair."""
    n = universe_size(s, k)
    even = int("01" * (n // 2), 2)  # mask of all L (even) bit positions
    return ((bitmask & even) << 1) | ((bitmask >> 1) & even)


def reflection_orbit_rep(bitmask: int, s: int, k: int) -> int:
    """Canonical representative (minimum) of {rule, reflect(rule)}."""
    return min(bitmask, reflect_bitmask(bitmask, s, k))


# --- text notation ---

_SIZE_COMPACT = re.compile(r"s(\d+)k(\d+)$")
_CASE = re.compile(
    r"\s*(\d+)\s*,\s*(\d+)\s*->\s*(\d+)\s*,\s*(\d+)\s*,\s*([RL])\s*$")


def parse_rule(text: str) -> Rule:
    """Parse the ``tm ...`` rule notation; errors carry character positions."""
    s = k = None
    bitmask = None
    cases_src = None
    cases_offset = 0

    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def take_token():
        nonlocal pos
        skip_ws()
        start = pos
        while pos < len(text) and not text[pos].isspace():
            pos += 1
        return start, text[start:pos]

    start, tok = take_token()
    if tok != "tm":
        raise RuleFormatError("expected rule text to start with 'tm'", start)

    while True:
        skip_ws()
        if pos >= len(text):
            break
        start = pos
        if text.startswith("cases=", pos):
            pos += len("cases=")
            if pos < len(text) and text[pos] in "'\"":
                quote = text[pos]
                end = text.find(quote, pos + 1)
                if end < 0:
                    raise RuleFormatError("unterminated quoted cases value", pos)
                cases_offset = pos + 1
                cases_src = text[pos + 1:end]
                pos = end + 1
            else:
                cases_offset = pos
                cases_src = text[pos:]
                pos = len(text)
            continue
        _, tok = take_token()
        if tok.startswith("#"):
            try:
                bitmask = int(tok[1:], 16)
            except ValueError:
                raise RuleFormatError(f"bad hex bitmask {tok!r}", start) from None
        elif tok.startswith("s=") or tok.startswith("k="):
            try:
                value = int(tok[2:])
            except ValueError:
                raise RuleFormatError(f"bad integer in {tok!r}", start) from None
            if tok[0] == "s":
                s = value
            else:
                k = value
        elif _SIZE_COMPACT.match(tok):
            m = _SIZE_COMPACT.match(tok)
            s, k = int(m.group(1)), int(m.group(2))
        else:
            raise RuleFormatError(f"unrecognized token {tok!r}", start)

    if s is None or k is None:
        raise RuleFormatError("rule text must give s and k (s=.. k=.. or s<i>k<j>)")
    if bitmask is None and cases_src is None:
        raise RuleFormatError("rule text needs cases=... or #<hex bitmask>")
    if bitmask is not None and cases_src is not None:
        raise RuleFormatError("give either cases=... or #<hex>, not both")

    if bitmask is not None:
        return rule_from_bitmask(s, k, bitmask)

    cases = []
    offset = 0
    for part in cases_src.split(";"):
        if part.strip():
            m = _CASE.match(part)
            if not m:
                raise RuleFormatError(
                    f"bad case syntax {part.strip()!r}", cases_offset + offset)
            s_in, c_in, s_out, c_out = (int(m.group(i)) for i in range(1, 5))
            move = RIGHT if m.group(5) == "R" else LEFT
            cases.append(Case(s_in, c_in, s_out, c_out, move))
        offset += len(part) + 1
    if not cases:
        raise RuleFormatError("empty cases list", cases_offset)
    return Rule(s, k, tuple(cases))


def format_rule(rule: Rule, style: str = "cases") -> str:
    """Render a rule back to text; parse(format(r)) == r bit-exactly."""
    if style == "hex":
        return f"tm s{rule.s}k{rule.k} #{bitmask_of(rule):x}"
    if style != "cases":
        raise ValueError(f"unknown style {style!r}")
    body = "; ".join(
        f"{c.s_in},{c.c_in}->{c.s_out},{c.c_out},{'R' if c.move == RIGHT else 'L'}"
        for c in rule.cases)
    return f'tm s={rule.s} k={rule.k} cases="{body}"'
