"""Rules, configurations, and one multiway evolution step.

A machine has ``s`` head states (1..s) and ``k`` tape colors (0..k-1, with
0 the blank). A rule is a set of cases; each case rewrites one
(state, color) input into an outcome (state, written color, head move of
one cell). Inputs may repeat across cases, which is what makes evolution
multiway: every case matching the current input spawns its own successor.
A configuration whose input matches no case at all is halted.

The tape is bi-infinite and blank-initialized; configurations store only
the non-blank cells, keyed by absolute position with the initial head
cell at position 0. Two configurations are equal only if head state, head
position, and the full sparse tape agree, so head positions are never
quotiented away.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .errors import InvalidConfigurationError, RuleFormatError

LEFT = -1
RIGHT = 1
BLANK = 0


class Case(NamedTuple):
    """One rewrite case (s_in, c_in) -> (s_out, c_out, move)."""

    s_in: int
    c_in: int
    s_out: int
    c_out: int
    move: int  # LEFT (-1) or RIGHT (+1)

    @property
    def input(self) -> tuple[int, int]:
        return (self.s_in, self.c_in)


class Configuration(NamedTuple):
    """Complete machine state: head state, absolute head position, sparse tape.

    ``tape`` is a sorted tuple of (position, color) pairs holding only
    non-blank cells, which makes configurations hashable and makes
    equality exactly the identity the evolution merges on.
    """

    head_state: int
    head_pos: int
    tape: tuple[tuple[int, int], ...]

    def color_at(self, pos: int) -> int:
        for p, c in self.tape:
            if p == pos:
                return c
        return BLANK

    def tape_dict(self) -> dict[int, int]:
        return dict(self.tape)


def make_config(head_state: int = 1, head_pos: int = 0,
                tape: Mapping[int, int] | None = None) -> Configuration:
    """Build a configuration, dropping blank cells and sorting the tape."""
    items = ()
    if tape:
        items = tuple(sorted((p, c) for p, c in tape.items() if c != BLANK))
    return Configuration(head_state, head_pos, items)


BLANK_CONFIG = make_config()


def config_sort_key(config: Configuration) -> tuple:
    """Canonical ordering: head position, then tape, then head state."""
    return (config.head_pos, config.tape, config.head_state)


def describe(config: Configuration) -> str:
    """Compact one-line rendering, e.g. ``s1@-2 {-1:1, 0:1}``."""
    cells = ", ".join(f"{p}:{c}" for p, c in config.tape)
    return f"s{config.head_state}@{config.head_pos} {{{cells}}}"


def _validate_case(case: Case, s: int, k: int) -> None:
    if not (1 <= case.s_in <= s and 1 <= case.s_out <= s):
        raise RuleFormatError(f"head state out of range in case {case!r} for s={s}")
    if not (0 <= case.c_in < k and 0 <= case.c_out < k):
        raise RuleFormatError(f"color out of range in case {case!r} for k={k}")
    if case.move not in (LEFT, RIGHT):
        raise RuleFormatError(f"move must be -1 or +1 in case {case!r}")


@dataclass(frozen=True)
class Rule:
    """A machine: head-state count, color count, and a set of cases.

    Cases are stored deduplicated in canonical lexicographic order
    (s_in, c_in, s_out, c_out, move) with move -1 before +1; every
    ordered listing in the package follows that order.
    """

    s: int
    k: int
    cases: tuple[Case, ...] = field(default=())

    def __post_init__(self):
        if self.s < 1 or self.k < 1:
            raise RuleFormatError(f"need s >= 1 and k >= 1, got s={self.s}, k={self.k}")
        canonical = tuple(sorted(set(Case(*c) for c in self.cases)))
        if len(canonical) != len(self.cases):
            raise RuleFormatError("duplicate cases in rule")
        for case in canonical:
            _validate_case(case, self.s, self.k)
        object.__setattr__(self, "cases", canonical)

    @property
    def p(self) -> int:
        return len(self.cases)

    def cases_for_input(self, head_state: int, color: int) -> tuple[Case, ...]:
        return tuple(c for c in self.cases if c.s_in == head_state and c.c_in == color)


def make_rule(s: int, k: int, cases: Iterable[tuple]) -> Rule:
    return Rule(s, k, tuple(Case(*c) for c in cases))


def _check_config(rule: Rule, config: Configuration) -> None:
    if not 1 <= config.head_state <= rule.s:
        raise InvalidConfigurationError(
            f"head state {config.head_state} out of range for s={rule.s}")
    for _, c in config.tape:
        if not 0 < c < rule.k:
            raise InvalidConfigurationError(f"tape color {c} out of range for k={rule.k}")


def applicable_cases(rule: Rule, config: Configuration) -> list[Case]:
    """Cases whose input matches the configuration, in canonical order.

    An empty result means the configuration is halted.
    """
    _check_config(rule, config)
    color = config.color_at(config.head_pos)
    return [c for c in rule.cases
            if c.s_in == config.head_state and c.c_in == color]


def is_halted(rule: Rule, config: Configuration) -> bool:
    return not applicable_cases(rule, config)


def apply_case(case: Case, config: Configuration) -> Configuration:
    """Successor under one case: write c_out under the head, then move.

    Writing blank deletes the cell, so write-then-erase round-trips to a
    configuration equal (not just equivalent) to the original.
    """
    tape = config.tape_dict()
    if case.c_out == BLANK:
        tape.pop(config.head_pos, None)
    else:
        tape[config.head_pos] = case.c_out
    return make_config(case.s_out, config.head_pos + case.move, tape)


def successors(rule: Rule, config: Configuration) -> list[tuple[Case, Configuration]]:
    """(case, successor) pairs for every applicable case, canonical order."""
    return [(case, apply_case(case, config)) for case in applicable_cases(rule, config)]


def step(rule: Rule, config: Configuration) -> frozenset[Configuration]:
    """The set of all one-step successors; empty iff halted.

    Distinct applicable cases always yield distinct successors, so the
    set size equals the number of applicable cases.
    """
    return frozenset(succ for _, succ in successors(rule, config))


def canonical_hash(config: Configuration) -> bytes:
    """16-byte digest, stable across runs and processes.

    Equal configurations hash equal; the sparse canonical form means a
    written-then-erased cell leaves the digest unchanged.
    """
    h = hashlib.blake2b(digest_size=16)
    h.update(f"{config.head_state}|{config.head_pos}".encode())
    for p, c in config.tape:
        h.update(f"|{p}:{c}".encode())
    return h.digest()
