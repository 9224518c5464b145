"""Exhaustive rule-space surveys.

Sweeps enumerate every rule of a given size, evolve each from the blank
tape, and aggregate: deterministic-incomplete survival maxima, the
busy-beaver style maxima over closed multiway graphs (longest halting or
cycling time, most states, longest minimal halting time, most distinct
halting states), halting-time and state-count distributions, growth
sequences, and repetition periods of the k = 1 braids.

The per-rule engine packs configurations into single integers (tape
digits, head position, head state) so the hot loop is pure int
arithmetic; caps on depth and discovered states bound the work per rule,
and anything that exceeds them is reported as open-at-cutoff rather than
classified. Rules that hit a cap are data, not errors.

Sweeps are embarrassingly parallel over contiguous rank ranges of the
rule stream; workers share nothing and partial aggregates merge in chunk
order, so results are identical for any worker count. A checkpoint file
(one record line per rule, schema-versioned) allows an interrupted sweep
to resume without changing the final output.
"""

from __future__ import annotations

import json
import multiprocessing
import os
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, NamedTuple

from .machine import BLANK_CONFIG, Rule
from .multiway import state_count_sequence
from .rulespace import (RuleId, index_to_case, reflect_bitmask, rule_from_bitmask,
                        unrank_bitmask, universe_size)

CHECKPOINT_SCHEMA = "mwtm.census/1"

TERM_CODES = ("closed-all-halt", "closed-with-cycles", "open-at-depth")


# --- fast single-rule engines ---

def _case_table(s: int, k: int, bitmask: int) -> list[tuple[tuple[int, int, int], ...]]:
    """Per-input successor outcomes: slot st0*k + color -> ((s_out0, c_out, move), ...)."""
    table: list[list[tuple[int, int, int]]] = [[] for _ in range(s * k)]
    i = 0
    bm = bitmask
    while bm:
        if bm & 1:
            case = index_to_case(i, s, k)
            table[(case.s_in - 1) * k + case.c_in].append(
                (case.s_out - 1, case.c_out, case.move))
        bm >>= 1
        i += 1
    return [tuple(entry) for entry in table]


class ExploreOutcome(NamedTuple):
    closed: bool
    state_count: int
    max_layer: int
    min_halt: int | None
    max_halt: int | None
    halt_count: int
    cyclic: bool
    depth_reached: int


def explore_rule(s: int, k: int, bitmask: int, depth_cap: int,
                 state_cap: int) -> ExploreOutcome:
    """Breadth-first closure of one rule from the blank tape, int-encoded.

    Closes early when the frontier dies out (or consists solely of halted
    states); reports open when the depth cap is reached with live states
    or the state cap is exceeded.
    """
    table = _case_table(s, k, bitmask)
    span = 2 * depth_cap + 3
    offset = depth_cap + 1
    two = k == 2
    powers = None if two else [k ** i for i in range(span)]
    root_key = offset * s
    seen = {root_key}
    frontier = [(0, offset, 0, root_key)]  # (state0, pos, tape, key)
    edges: list[tuple[int, int]] = []
    halt_count = 0
    min_halt: int | None = None
    max_halt: int | None = None
    max_layer = 0
    depth = 0
    while frontier and depth < depth_cap:
        nxt = []
        for st0, pos, tape, key in frontier:
            if two:
                color = (tape >> pos) & 1
            else:
                color = (tape // powers[pos]) % k
            outs = table[st0 * k + color]
            if not outs:
                halt_count += 1
                if min_halt is None:
                    min_halt = depth
                max_halt = depth
                continue
            for so0, co, mv in outs:
                if two:
                    t2 = tape ^ ((color ^ co) << pos)
                else:
                    t2 = tape + (co - color) * powers[pos]
                p2 = pos + mv
                k2 = (t2 * span + p2) * s + so0
                edges.append((key, k2))
                if k2 not in seen:
                    if len(seen) >= state_cap:
                        return ExploreOutcome(False, len(seen), max_layer, min_halt,
                                              max_halt, halt_count, False, depth)
                    seen.add(k2)
                    nxt.append((so0, p2, t2, k2))
        if nxt:
            max_layer = depth + 1
        frontier = nxt
        depth += 1
    if frontier:
        # depth cap hit; unexpanded states count as open unless all halted
        for st0, pos, tape, key in frontier:
            if two:
                color = (tape >> pos) & 1
            else:
                color = (tape // powers[pos]) % k
            if table[st0 * k + color]:
                return ExploreOutcome(False, len(seen), max_layer, min_halt,
                                      max_halt, halt_count, False, depth)
        for st0, pos, tape, key in frontier:
            halt_count += 1
            if min_halt is None:
                min_halt = depth
            max_halt = depth
    cyclic = _has_cycle(seen, edges)
    return ExploreOutcome(True, len(seen), max_layer, min_halt, max_halt,
                          halt_count, cyclic, depth)


def _has_cycle(nodes: set[int], edges: list[tuple[int, int]]) -> bool:
    indeg = dict.fromkeys(nodes, 0)
    out: dict[int, list[int]] = {}
    for u, v in edges:
        indeg[v] += 1
        out.setdefault(u, []).append(v)
    queue = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while queue:
        u = queue.pop()
        seen += 1
        for v in out.get(u, ()):
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    return seen != len(nodes)


def simulate_deterministic(s: int, k: int, bitmask: int,
                           cutoff: int) -> tuple[str, int]:
    """Run a deterministic rule from blank: ('halt', steps), ('loop', steps),
    or ('cutoff', cutoff). Non-halting is proven only by exact state revisit."""
    table = _case_table(s, k, bitmask)
    span = 2 * cutoff + 3
    offset = cutoff + 1
    two = k == 2
    powers = None if two else [k ** i for i in range(span)]
    st0, pos, tape = 0, offset, 0
    seen = {(tape * span + pos) * s + st0}
    for t in range(cutoff):
        if two:
            color = (tape >> pos) & 1
        else:
            color = (tape // powers[pos]) % k
        outs = table[st0 * k + color]
        if not outs:
            return ("halt", t)
        so0, co, mv = outs[0]
        if two:
            tape ^= (color ^ co) << pos
        else:
            tape += (co - color) * powers[pos]
        pos += mv
        st0 = so0
        key = (tape * span + pos) * s + st0
        if key in seen:
            return ("loop", t + 1)
        seen.add(key)
    return ("cutoff", cutoff)


# --- census records and aggregates ---

@dataclass(frozen=True)
class CensusRecord:
    """Per-rule outcome of a multiway sweep (closed graphs carry full stats)."""

    bitmask: int
    termination: str
    state_count: int
    survival_time: int | None  # max layer index; None while open
    max_halt_layer: int | None
    min_halt_layer: int | None
    halting_state_count: int
    cyclic: bool
    depth_reached: int

    def to_line(self) -> str:
        return json.dumps(["R", self.bitmask, TERM_CODES.index(self.termination),
                           self.state_count, self.survival_time, self.max_halt_layer,
                           self.min_halt_layer, self.halting_state_count,
                           int(self.cyclic), self.depth_reached],
                          separators=(",", ":"))

    @staticmethod
    def from_line(line: str) -> "CensusRecord":
        tag, bm, term, states, surv, mx, mn, hc, cyc, depth = json.loads(line)
        if tag != "R":
            raise ValueError(f"not a record line: {line!r}")
        return CensusRecord(bm, TERM_CODES[term], states, surv, mx, mn, hc,
                            bool(cyc), depth)


def record_from_outcome(bitmask: int, out: ExploreOutcome) -> CensusRecord:
    if not out.closed:
        term = "open-at-depth"
        survival = None
    else:
        term = "closed-with-cycles" if out.cyclic else "closed-all-halt"
        survival = out.max_layer
    return CensusRecord(bitmask, term, out.state_count, survival, out.max_halt,
                        out.min_halt, out.halt_count, out.cyclic, out.depth_reached)


def reflected_record(rec: CensusRecord, s: int, k: int) -> CensusRecord:
    """The mirror rule's record: identical stats, mirrored identity."""
    return CensusRecord(reflect_bitmask(rec.bitmask, s, k), rec.termination,
                        rec.state_count, rec.survival_time, rec.max_halt_layer,
                        rec.min_halt_layer, rec.halting_state_count, rec.cyclic,
                        rec.depth_reached)


CRITERIA = ("survival", "max_halt", "min_halt", "states", "halt_states")


def _criterion_value(rec: CensusRecord, criterion: str) -> int | None:
    if rec.termination == "open-at-depth":
        return None
    if criterion == "survival":
        return rec.survival_time
    if criterion == "max_halt":
        return rec.max_halt_layer
    if criterion == "min_halt":
        return rec.min_halt_layer
    if criterion == "states":
        return rec.state_count
    if criterion == "halt_states":
        return rec.halting_state_count if rec.halting_state_count else None
    raise ValueError(criterion)


@dataclass
class Best:
    """Running maximum with its witnesses."""

    value: int | None = None
    witnesses: list[int] = field(default_factory=list)

    def offer(self, value: int | None, bitmask: int) -> None:
        if value is None:
            return
        if self.value is None or value > self.value:
            self.value = value
            self.witnesses = [bitmask]
        elif value == self.value:
            self.witnesses.append(bitmask)

    def merge(self, other: "Best") -> None:
        if other.value is None:
            return
        if self.value is None or other.value > self.value:
            self.value = other.value
            self.witnesses = list(other.witnesses)
        elif other.value == self.value:
            self.witnesses.extend(other.witnesses)


@dataclass
class BBAggregate:
    """Mergeable summary of a multiway busy-beaver sweep."""

    total: int = 0
    closed_count: int = 0
    open_count: int = 0
    survival_hist: Counter = field(default_factory=Counter)
    states_hist: Counter = field(default_factory=Counter)
    best: dict[str, Best] = field(
        default_factory=lambda: {c: Best() for c in CRITERIA})
    open_examples: list[int] = field(default_factory=list)

    def add(self, rec: CensusRecord) -> None:
        self.total += 1
        if rec.termination == "open-at-depth":
            self.open_count += 1
            if len(self.open_examples) < 8:
                self.open_examples.append(rec.bitmask)
            return
        self.closed_count += 1
        self.survival_hist[rec.survival_time] += 1
        self.states_hist[rec.state_count] += 1
        for criterion in CRITERIA:
            self.best[criterion].offer(_criterion_value(rec, criterion), rec.bitmask)

    def merge(self, other: "BBAggregate") -> None:
        self.total += other.total
        self.closed_count += other.closed_count
        self.open_count += other.open_count
        self.survival_hist.update(other.survival_hist)
        self.states_hist.update(other.states_hist)
        for criterion in CRITERIA:
            self.best[criterion].merge(other.best[criterion])
        for bm in other.open_examples:
            if len(self.open_examples) < 8:
                self.open_examples.append(bm)

    def finalize(self) -> None:
        for best in self.best.values():
            best.witnesses.sort()
        self.open_examples.sort()


@dataclass
class BBCensus:
    """Result of multiway_bb_census for one (s, k, p)."""

    s: int
    k: int
    p: int
    depth_cutoff: int
    state_cap: int
    aggregate: BBAggregate

    @property
    def inconclusive_count(self) -> int:
        return self.aggregate.open_count

    def best(self, criterion: str) -> Best:
        return self.aggregate.best[criterion]

    def witness_rule_ids(self, criterion: str) -> list[RuleId]:
        return [RuleId(self.s, self.k, bm) for bm in self.best(criterion).witnesses]


def _iter_bitmasks(n: int, p: int, start_rank: int, count: int) -> Iterator[int]:
    """Gosper walk of ``count`` popcount-p bitmasks starting at a rank."""
    v = unrank_bitmask(n, p, start_rank)
    limit = 1 << n
    for _ in range(count):
        if v >= limit:
            return
        yield v
        low = v & -v
        ripple = v + low
        v = ripple | (((v ^ ripple) >> 2) // low)


def _bb_chunk(args) -> tuple[int, list[str]]:
    """Worker: explore one rank range, return (chunk_index, record lines)."""
    (chunk_index, s, k, p, start, count, depth_cap, state_cap, use_reflection) = args
    n = universe_size(s, k)
    lines = []
    for bm in _iter_bitmasks(n, p, start, count):
        if use_reflection:
            mate = reflect_bitmask(bm, s, k)
            if mate < bm:
                continue  # mate's chunk emits both
            out = explore_rule(s, k, bm, depth_cap, state_cap)
            rec = record_from_outcome(bm, out)
            lines.append(rec.to_line())
            if mate != bm:
                lines.append(reflected_record(rec, s, k).to_line())
        else:
            out = explore_rule(s, k, bm, depth_cap, state_cap)
            lines.append(record_from_outcome(bm, out).to_line())
    return chunk_index, lines


def _read_checkpoint(path: str, header: dict) -> tuple[set[int], list[str]]:
    done: set[int] = set()
    lines: list[str] = []
    pending: list[str] = []
    if not os.path.exists(path):
        return done, lines
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if not first:
            return done, lines
        existing = json.loads(first)
        if existing != header:
            raise ValueError(f"checkpoint {path} was written with different parameters")
        for raw in fh:
            raw = raw.strip()
            if not raw:
                continue
            entry = json.loads(raw)
            if entry[0] == "C":
                done.add(entry[1])
                lines.extend(pending)
                pending = []
            else:
                pending.append(raw)
    return done, lines  # records of incomplete chunks are dropped


def _run_chunked(tasks: list, worker, workers: int, checkpoint: str | None,
                 header: dict | None) -> Iterator[tuple[int, list[str]]]:
    """Run chunk tasks (optionally in a pool), replaying finished chunks
    from the checkpoint and appending newly finished ones to it."""
    done: set[int] = set()
    replayed: list[str] = []
    fh = None
    if checkpoint:
        done, replayed = _read_checkpoint(checkpoint, header)
        exists = os.path.exists(checkpoint)
        fh = open(checkpoint, "a", encoding="utf-8")
        if not exists or os.path.getsize(checkpoint) == 0:
            fh.write(json.dumps(header, separators=(",", ":")) + "\n")
    try:
        if replayed:
            yield -1, replayed
        todo = [t for t in tasks if t[0] not in done]
        if workers > 1 and len(todo) > 1:
            with multiprocessing.get_context("fork").Pool(workers) as pool:
                results = pool.imap(worker, todo)
                for chunk_index, lines in results:
                    if fh:
                        for line in lines:
                            fh.write(line + "\n")
                        fh.write(json.dumps(["C", chunk_index]) + "\n")
                        fh.flush()
                    yield chunk_index, lines
        else:
            for task in todo:
                chunk_index, lines = worker(task)
                if fh:
                    for line in lines:
                        fh.write(line + "\n")
                    fh.write(json.dumps(["C", chunk_index]) + "\n")
                    fh.flush()
                yield chunk_index, lines
    finally:
        if fh:
            fh.close()


def multiway_bb_census(s: int, k: int, p: int, depth_cutoff: int = 500,
                       state_cap: int = 100_000, workers: int = 1,
                       checkpoint: str | None = None,
                       chunk_size: int = 20_000,
                       use_reflection: bool = True) -> BBCensus:
    """Explore every rule with p cases and aggregate busy-beaver maxima.

    Reflection symmetry is exact (mirrored rules have mirrored evolutions),
    so by default each reflection orbit is explored once and the mate's
    record synthesized; results are identical to the full sweep.
    """
    n = universe_size(s, k)
    total = comb(n, p)
    header = {"schema": CHECKPOINT_SCHEMA, "kind": "bb", "s": s, "k": k, "p": p,
              "depth_cutoff": depth_cutoff, "state_cap": state_cap,
              "chunk_size": chunk_size, "use_reflection": use_reflection}
    tasks = []
    for chunk_index, start in enumerate(range(0, total, chunk_size)):
        count = min(chunk_size, total - start)
        tasks.append((chunk_index, s, k, p, start, count, depth_cutoff,
                      state_cap, use_reflection))
    agg = BBAggregate()
    for _, lines in _run_chunked(tasks, _bb_chunk, workers, checkpoint, header):
        for line in lines:
            agg.add(CensusRecord.from_line(line))
    agg.finalize()
    return BBCensus(s, k, p, depth_cutoff, state_cap, agg)


def halting_distributions(s: int, k: int, p_values: Iterable[int],
                          **census_kwargs) -> dict[int, dict[str, Counter]]:
    """Per-p histograms over closed graphs: halting/cycling time (survival)
    and total state count, as exact integer counters."""
    out: dict[int, dict[str, Counter]] = {}
    for p in p_values:
        census = multiway_bb_census(s, k, p, **census_kwargs)
        out[p] = {"survival": Counter(census.aggregate.survival_hist),
                  "states": Counter(census.aggregate.states_hist)}
    return out


# --- deterministic-incomplete survival census ---

@dataclass
class SurvivalAggregate:
    total: int = 0
    halted: int = 0
    looped: int = 0
    inconclusive: int = 0
    survival_hist: Counter = field(default_factory=Counter)
    best: Best = field(default_factory=Best)
    inconclusive_examples: list[int] = field(default_factory=list)

    def add(self, bitmask: int, outcome: str, steps: int) -> None:
        self.total += 1
        if outcome == "halt":
            self.halted += 1
            self.survival_hist[steps] += 1
            self.best.offer(steps, bitmask)
        elif outcome == "loop":
            self.looped += 1
        else:
            self.inconclusive += 1
            if len(self.inconclusive_examples) < 8:
                self.inconclusive_examples.append(bitmask)

    def merge(self, other: "SurvivalAggregate") -> None:
        self.total += other.total
        self.halted += other.halted
        self.looped += other.looped
        self.inconclusive += other.inconclusive
        self.survival_hist.update(other.survival_hist)
        self.best.merge(other.best)
        for bm in other.inconclusive_examples:
            if len(self.inconclusive_examples) < 8:
                self.inconclusive_examples.append(bm)


class SurvivalCensus(NamedTuple):
    """Survival maxima of deterministic-incomplete rules, per case count."""

    s: int
    k: int
    cutoff: int
    per_p: dict[int, SurvivalAggregate]

    def global_best(self) -> Best:
        best = Best()
        for agg in self.per_p.values():
            best.merge(agg.best)
        best.witnesses.sort()
        return best

    def orbit_witnesses(self, p: int | None = None) -> list[int]:
        """Reflection-reduced witnesses of the maximum (global or one p)."""
        best = self.per_p[p].best if p is not None else self.global_best()
        reps = {min(bm, reflect_bitmask(bm, self.s, self.k))
                for bm in best.witnesses}
        return sorted(reps)


def det_incomplete_count(s: int, k: int, p: int) -> int:
    """Rules with p distinct-input cases and at least one input missing."""
    if p >= s * k:
        return 0
    return comb(s * k, p) * (2 * s * k) ** p


def det_incomplete_bitmask(s: int, k: int, p: int, rank: int) -> int:
    """Rank -> bitmask for the (input subset, outcome assignment) encoding."""
    outcomes = 2 * s * k
    subset_rank, outcome_rank = divmod(rank, outcomes ** p)
    input_mask = unrank_bitmask(s * k, p, subset_rank)
    inputs = [i for i in range(s * k) if input_mask >> i & 1]
    bitmask = 0
    for input_idx in reversed(inputs):
        outcome_rank, digit = divmod(outcome_rank, outcomes)
        bitmask |= 1 << (input_idx * outcomes + digit)
    return bitmask


def _survival_chunk(args) -> tuple[int, list[str]]:
    chunk_index, s, k, p, start, count, cutoff = args
    total = det_incomplete_count(s, k, p)
    lines = []
    for rank in range(start, min(start + count, total)):
        bm = det_incomplete_bitmask(s, k, p, rank)
        outcome, steps = simulate_deterministic(s, k, bm, cutoff)
        lines.append(json.dumps(["S", p, bm, outcome, steps], separators=(",", ":")))
    return chunk_index, lines


def survival_census(s: int, k: int, p_values: Iterable[int] | None = None,
                    cutoff: int = 500, workers: int = 1,
                    checkpoint: str | None = None,
                    chunk_size: int = 50_000) -> SurvivalCensus:
    """Simulate every deterministic-incomplete rule from blank.

    survival = number of rule applications before the missing input is
    reached. Loops are proven by exact configuration revisit; rules that
    reach the cutoff without halting or looping (e.g. translators) are
    counted inconclusive and listed, not classified.
    """
    if p_values is None:
        p_values = range(1, s * k)
    p_values = [p for p in p_values if det_incomplete_count(s, k, p) > 0]
    header = {"schema": CHECKPOINT_SCHEMA, "kind": "survival", "s": s, "k": k,
              "p": sorted(p_values), "cutoff": cutoff, "chunk_size": chunk_size}
    tasks = []
    chunk_index = 0
    for p in p_values:
        total = det_incomplete_count(s, k, p)
        for start in range(0, total, chunk_size):
            tasks.append((chunk_index, s, k, p, start,
                          min(chunk_size, total - start), cutoff))
            chunk_index += 1
    per_p = {p: SurvivalAggregate() for p in p_values}
    for _, lines in _run_chunked(tasks, _survival_chunk, workers, checkpoint, header):
        for line in lines:
            _, p, bm, outcome, steps = json.loads(line)
            per_p[p].add(bm, outcome, steps)
    for agg in per_p.values():
        agg.best.witnesses.sort()
        agg.inconclusive_examples.sort()
    return SurvivalCensus(s, k, cutoff, per_p)


# --- growth sequences ---

def growth_census(s: int, k: int, p: int, steps: int = 15,
                  max_nodes: int = 200_000) -> dict[int, tuple[int, ...]]:
    """Cumulative state-count sequence for every rule with p cases."""
    n = universe_size(s, k)
    sequences: dict[int, tuple[int, ...]] = {}
    for bm in _iter_bitmasks(n, p, 0, comb(n, p)):
        rule = rule_from_bitmask(s, k, bm)
        seq = state_count_sequence(rule, [BLANK_CONFIG], steps, max_nodes)
        sequences[bm] = tuple(seq)
    return sequences


def find_sequence(sequences: dict[int, tuple[int, ...]],
                  target: Iterable[int]) -> list[int]:
    """Bitmasks whose sequence starts with the target values."""
    target = tuple(target)
    hits = [bm for bm, seq in sequences.items() if seq[:len(target)] == target]
    return sorted(hits)


def growth_base(seq: Iterable[int]) -> float:
    """Five-step geometric-mean growth estimate (a_T / a_{T-5})^(1/5)."""
    seq = list(seq)
    if len(seq) < 6 or seq[-6] <= 0:
        raise ValueError("need at least 6 positive trailing entries")
    return (seq[-1] / seq[-6]) ** 0.2


# --- k = 1 braid periods ---

class BraidPeriod(NamedTuple):
    rule_id: RuleId
    period: int | None
    motif_width: int | None


def _layer_fingerprints(s: int, bitmask: int, steps: int):
    """Slice fingerprints of a k=1 rule: states are just (head state, position)."""
    table = _case_table(s, 1, bitmask)
    layers: list[list[tuple[int, int]]] = [[(0, 0)]]
    seen = {(0, 0)}
    frontier = [(0, 0)]
    for _ in range(steps):
        nxt = []
        for st0, pos in frontier:
            for so0, _, mv in table[st0]:
                node = (so0, pos + mv)
                if node not in seen:
                    seen.add(node)
                    nxt.append(node)
        if not nxt:
            break
        layers.append(nxt)
        frontier = nxt
    prints = []
    for nodes in layers:
        lo = min(pos for _, pos in nodes)
        hi = max(pos for _, pos in nodes)
        shape = tuple(sorted((st, pos - lo) for st, pos in nodes))
        prints.append((shape, lo, hi))
    return prints


def detect_period(s: int, bitmask: int, steps: int) -> BraidPeriod:
    """Least P with shift-consistent repetition of slice fingerprints.

    Verified for every t in [steps//2, steps-P] with a window of at least
    three repetitions; rules whose evolution closes (or never settles)
    report no period.
    """
    prints = _layer_fingerprints(s, bitmask, steps)
    rid = RuleId(s, 1, bitmask)
    if len(prints) <= steps:  # closed before the horizon: no braid
        return BraidPeriod(rid, None, None)
    t0 = steps // 2
    for period in range(1, (steps - t0) // 3 + 1):
        shift = None
        ok = True
        for t in range(t0, steps - period + 1):
            (shape_a, lo_a, hi_a) = prints[t]
            (shape_b, lo_b, hi_b) = prints[t + period]
            if shape_a != shape_b or (hi_b - lo_b) != (hi_a - lo_a):
                ok = False
                break
            delta = lo_b - lo_a
            if shift is None:
                shift = delta
            elif delta != shift:
                ok = False
                break
        if ok:
            shape, lo, hi = prints[t0]
            return BraidPeriod(rid, period, hi - lo + 1)
    return BraidPeriod(rid, None, None)


def k1_period_census(s: int, p: int, steps: int = 24) -> list[BraidPeriod]:
    n = universe_size(s, 1)
    results = []
    for bm in _iter_bitmasks(n, p, 0, comb(n, p)):
        results.append(detect_period(s, bm, steps))
    return results


# --- reports ---

def bb_census_tsv(census: BBCensus) -> str:
    """Maxima per criterion with raw and reflection-reduced witness counts."""
    lines = ["criterion\tvalue\twitnesses\twitnessOrbits\tfirstWitness"]
    for criterion in CRITERIA:
        best = census.best(criterion)
        if best.value is None:
            lines.append(f"{criterion}\t-\t0\t0\t-")
            continue
        orbits = {min(bm, reflect_bitmask(bm, census.s, census.k))
                  for bm in best.witnesses}
        first = f"{min(best.witnesses):#x}"
        lines.append(f"{criterion}\t{best.value}\t{len(best.witnesses)}\t"
                     f"{len(orbits)}\t{first}")
    lines.append(f"closed\t{census.aggregate.closed_count}\t-\t-\t-")
    lines.append(f"openAtCutoff\t{census.aggregate.open_count}\t-\t-\t-")
    return "\n".join(lines) + "\n"


def survival_tsv(census: SurvivalCensus) -> str:
    lines = ["p\tmaxSurvival\twitnesses\twitnessOrbits\thalted\tlooped\tinconclusive"]
    for p, agg in sorted(census.per_p.items()):
        value = agg.best.value if agg.best.value is not None else "-"
        orbits = len(census.orbit_witnesses(p)) if agg.best.value is not None else 0
        lines.append(f"{p}\t{value}\t{len(agg.best.witnesses)}\t{orbits}\t"
                     f"{agg.halted}\t{agg.looped}\t{agg.inconclusive}")
    g = census.global_best()
    lines.append(f"all\t{g.value}\t{len(g.witnesses)}\t"
                 f"{len(census.orbit_witnesses())}\t-\t-\t-")
    return "\n".join(lines) + "\n"


def distributions_tsv(dists: dict[int, dict[str, Counter]]) -> str:
    lines = ["p\tquantity\tvalue\tcount"]
    for p in sorted(dists):
        for quantity in ("survival", "states"):
            for value in sorted(dists[p][quantity]):
                lines.append(f"{p}\t{quantity}\t{value}\t{dists[p][quantity][value]}")
    return "\n".join(lines) + "\n"
