"""Command-line interface.

Exit codes: 0 success, 1 usage error (including unparsable rule text,
reported with a character position), 2 resource cap hit, 3 census that
produced only inconclusive results.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import artifacts, causal, census, finite_tape, multiway
from .errors import MwtmError, ResourceLimitError, RuleFormatError
from .machine import BLANK_CONFIG
from .rulespace import parse_rule

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RESOURCE = 2
EXIT_INCONCLUSIVE = 3


class _UsageExit(Exception):
    def __init__(self, message: str):
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        raise _UsageExit(message)


def _default_workers() -> int:
    env = os.environ.get("MWTM_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise _UsageExit(f"MWTM_WORKERS must be an integer, got {env!r}")
    return 1


def _build_parser() -> _Parser:
    parser = _Parser(prog="mwtm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        return p

    def rule_opts(p, depth_default=None):
        p.add_argument("--rule", required=True, help="rule text (tm ...)")
        p.add_argument("--depth", type=int, default=depth_default, required=depth_default is None)
        p.add_argument("--cap-states", type=int, default=multiway.DEFAULT_NODE_CAP)

    def out_opts(p, default_format="json"):
        p.add_argument("--format", choices=artifacts.FORMATS, default=default_format)
        p.add_argument("--out", help="output path (stdout if omitted)")

    p = add("evolve", "evolve a rule from blank and print state counts per step")
    rule_opts(p)

    p = add("graph", "build and export the multiway graph")
    rule_opts(p)
    out_opts(p)

    p = add("branchial", "branchial graph of one slice")
    rule_opts(p)
    p.add_argument("--slice", type=int, default=None, help="slice index (default: depth)")
    p.add_argument("--tau", type=int, default=1)
    out_opts(p)

    p = add("causal", "multiway causal graph")
    rule_opts(p)
    p.add_argument("--seed", type=int, default=None,
                   help="also sample paths and report causal-graph isomorphism")
    out_opts(p)

    p = add("census", "busy-beaver census over all rules with p cases")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--depth", type=int, default=500)
    p.add_argument("--cap-states", type=int, default=100_000)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--checkpoint", help="resumable record file")
    p.add_argument("--out", help="TSV output path (stdout if omitted)")

    p = add("survival", "survival census over deterministic-incomplete rules")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=int, nargs="*", default=None)
    p.add_argument("--depth", type=int, default=500, help="step cutoff")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--checkpoint")
    p.add_argument("--out")

    p = add("finite", "finite-tape confluence table")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True, nargs="+")
    p.add_argument("--p", type=int, nargs="*", default=None)
    p.add_argument("--variant", choices=("blank", "full"), default="blank")
    p.add_argument("--boundary", choices=(finite_tape.CYCLIC, finite_tape.REFLECTING),
                   default=finite_tape.CYCLIC)
    p.add_argument("--out")

    p = add("rulial", "rulial (all-cases) finite-tape graph and its properties")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--boundary", choices=(finite_tape.CYCLIC, finite_tape.REFLECTING),
                   default=finite_tape.CYCLIC)
    out_opts(p)

    p = add("confluence", "bounded confluence check from the blank tape")
    rule_opts(p)

    p = add("export", "re-export a JSON graph file into another format")
    p.add_argument("--in", dest="input", required=True)
    out_opts(p, default_format="dot")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_evolve(args) -> int:
    rule = parse_rule(args.rule)
    counts = multiway.state_count_sequence(rule, [BLANK_CONFIG], args.depth,
                                           args.cap_states)
    for t, c in enumerate(counts):
        print(f"{t}\t{c}")
    print(f"states: {counts[-1]}")
    return EXIT_OK


def _cmd_graph(args) -> int:
    rule = parse_rule(args.rule)
    g = multiway.build(rule, [BLANK_CONFIG], args.depth, args.cap_states)
    _emit(artifacts.render(g, args.format), args.out)
    return EXIT_OK


def _cmd_branchial(args) -> int:
    rule = parse_rule(args.rule)
    g = multiway.build(rule, [BLANK_CONFIG], args.depth, args.cap_states)
    slice_t = args.slice if args.slice is not None else min(args.depth, g.max_layer())
    bg = multiway.branchial(g, slice_t, args.tau)
    _emit(artifacts.render(bg, args.format), args.out)
    return EXIT_OK


def _cmd_causal(args) -> int:
    rule = parse_rule(args.rule)
    g = multiway.build(rule, [BLANK_CONFIG], args.depth, args.cap_states)
    cg = causal.causal_graph(g)
    _emit(artifacts.render(cg, args.format), args.out)
    if args.seed is not None:
        report = causal.causal_invariance_sample(g, 20, args.seed)
        print(f"invariance: {report.isomorphic} "
              f"({report.paths_sampled} paths of length {report.path_length})",
              file=sys.stderr)
    return EXIT_OK


def _cmd_census(args) -> int:
    workers = args.workers if args.workers is not None else _default_workers()
    result = census.multiway_bb_census(args.s, args.k, args.p,
                                       depth_cutoff=args.depth,
                                       state_cap=args.cap_states,
                                       workers=workers,
                                       checkpoint=args.checkpoint)
    _emit(census.bb_census_tsv(result), args.out)
    if result.aggregate.closed_count == 0 and result.aggregate.open_count > 0:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _cmd_survival(args) -> int:
    workers = args.workers if args.workers is not None else _default_workers()
    result = census.survival_census(args.s, args.k, args.p, cutoff=args.depth,
                                    workers=workers, checkpoint=args.checkpoint)
    _emit(census.survival_tsv(result), args.out)
    halted = sum(agg.halted for agg in result.per_p.values())
    inconclusive = sum(agg.inconclusive for agg in result.per_p.values())
    if halted == 0 and inconclusive > 0:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _cmd_finite(args) -> int:
    ps = args.p if args.p else range(2, 2 * args.s * args.s * args.k * args.k + 1)
    cells = finite_tape.confluence_table(args.s, args.k, args.n, ps,
                                         variant=args.variant,
                                         boundary=args.boundary)
    _emit(finite_tape.table_tsv(cells), args.out)
    return EXIT_OK


def _cmd_rulial(args) -> int:
    stg = finite_tape.rulial_graph(args.s, args.k, args.n, args.boundary)
    if args.out:
        artifacts.export_graph(stg, args.format, args.out)
    outdegrees = sorted({len(a) for a in stg.out_adj})
    print(f"nodes: {stg.num_nodes}")
    print(f"outdegrees: {','.join(map(str, outdegrees))}")
    print(f"vertexTransitive: {finite_tape.is_vertex_transitive(stg)}")
    return EXIT_OK


def _cmd_confluence(args) -> int:
    rule = parse_rule(args.rule)
    verdict = causal.confluence_bounded(rule, [BLANK_CONFIG], args.depth,
                                        args.cap_states)
    print(f"{verdict.kind} depth={verdict.depth}")
    return EXIT_OK


def _cmd_export(args) -> int:
    doc = artifacts.import_graph(args.input)
    _emit(artifacts.render(doc, args.format), args.out)
    return EXIT_OK


_COMMANDS = {
    "evolve": _cmd_evolve,
    "graph": _cmd_graph,
    "branchial": _cmd_branchial,
    "causal": _cmd_causal,
    "census": _cmd_census,
    "survival": _cmd_survival,
    "finite": _cmd_finite,
    "rulial": _cmd_rulial,
    "confluence": _cmd_confluence,
    "export": _cmd_export,
}


def cli(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageExit as exc:
        print(f"mwtm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuleFormatError as exc:
        print(f"mwtm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"mwtm: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except MwtmError as exc:
        print(f"mwtm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli())


if __name__ == "__main__":
    main()
