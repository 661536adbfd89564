"""Command-line entry point: ``edstop <subcommand> ...``.

Exit status: 0 on success, 1 on usage/config/input errors, 2 when grid cells fail.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import corpus as cp
from . import evaldrive as ev
from . import stoplist as sl
from .textnorm import FrequencyTable, build_frequency_table, load_mapping

EXIT_OK, EXIT_USAGE, EXIT_CELL_FAILURE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def cmd_clean(args):
    records = cp.load_corpus(args.input, args.source)
    clean = cp.clean_corpus(records, args.source, args.threshold)
    cp.save_corpus(clean.records, args.output)
    if args.report:
        clean.filter_report.to_csv(args.report)
    for s in clean.filter_report.stages:
        print(f"{s.name:<13}{s.before:>7} -> {s.after}", file=sys.stderr)
    return EXIT_OK


def cmd_freq(args):
    mapping = load_mapping(args.mapping) if args.mapping else None
    corpora = [cp.load_corpus(p) for p in args.corpora]
    table = build_frequency_table(corpora, mapping)
    table.to_csv(args.output)
    print(f"{table.total_tokens} tokens, {table.unique_words} unique words", file=sys.stderr)
    return EXIT_OK


def cmd_candidates(args):
    table = FrequencyTable.from_csv(args.freq)
    msa = sl.load_list(args.msa, tag=sl.ListTag.MSA)
    english = sl.load_wordset(args.english)
    lexicon = sl.load_lexicon(args.lexicon) if args.lexicon else {}
    cands = [sl.auto_validate(c, msa, english, lexicon)
             for c in sl.extract_candidates(table, args.k)]
    sl.save_candidates(cands, args.output)
    pending = sum(c.status is sl.Status.PENDING for c in cands)
    print(f"{len(cands)} candidates, {pending} pending review", file=sys.stderr)
    return EXIT_OK


def cmd_review(args):
    cands = sl.load_candidates(args.candidates)
    decisions = sl.read_decision_log(args.log) if args.log else ()
    resolved = sl.resolve_candidates(cands, decisions, args.interactive, args.log)
    base = [c.surface for c in resolved if c.status is sl.Status.ACCEPTED]
    sl.save_list(sl.StopwordList(args.name, sl.ListTag.ED, base), args.output)
    if args.resolved:
        sl.save_candidates(resolved, args.resolved)
    print(f"{len(base)} base stopwords", file=sys.stderr)
    return EXIT_OK


def cmd_expand(args):
    base = sl.load_list(args.base, tag=sl.ListTag.ED)
    rules = sl.ExpansionRules()
    if args.no_compound_prefixes:
        rules = sl.ExpansionRules(compound_prefixes=())
    if args.possession:
        rules = sl.ExpansionRules(compound_prefixes=rules.compound_prefixes,
                                  possession_markers=frozenset(args.possession))
    expanded = sl.expand_list(base.entries, rules, args.name)
    sl.save_list(expanded, args.output)
    print(f"{len(base)} base words -> {len(expanded)} entries", file=sys.stderr)
    return EXIT_OK


def cmd_merge(args):
    a, b = sl.load_list(args.a), sl.load_list(args.b)
    sl.save_list(sl.merge_lists(a, b, args.name), args.output)
    return EXIT_OK


def cmd_grid(args):
    config = ev.GridConfig.load(args.config)
    report = ev.run_grid(config)
    if args.output:
        report.to_csv(args.output)
    else:
        sys.stdout.write(report.to_csv_text())
    return EXIT_CELL_FAILURE if report.failures else EXIT_OK


def cmd_report(args):
    sys.stdout.write(ev.format_table(ev.read_report(args.report)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="edstop", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("clean", help="run the cleaning cascade on a raw corpus")
    p.add_argument("input")
    p.add_argument("--source", required=True, choices=cp.SOURCES)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--report", help="write the per-stage filter counts as CSV")
    p.add_argument("--threshold", type=float, default=0.5,
                   help="minimum Arabic letter ratio (default: %(default)s)")
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("freq", help="word frequency table over cleaned corpora")
    p.add_argument("corpora", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--mapping", help="abbreviation/emoticon mapping file")
    p.set_defaults(func=cmd_freq)

    p = sub.add_parser("candidates", help="top-K candidates, auto-validated")
    p.add_argument("--freq", required=True)
    p.add_argument("--msa", required=True)
    p.add_argument("--english", required=True)
    p.add_argument("--lexicon")
    p.add_argument("-k", type=int, default=200)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("review", help="resolve pending candidates into a base list")
    p.add_argument("candidates")
    p.add_argument("--log", help="decision log (read, and appended to when interactive)")
    p.add_argument("--interactive", action="store_true")
    p.add_argument("--name", default="ED-base")
    p.add_argument("--resolved", help="also write the resolved candidate table")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_review)

    p = sub.add_parser("expand", help="add affixed forms and letter variants")
    p.add_argument("base")
    p.add_argument("--name", default="ED")
    p.add_argument("--no-compound-prefixes", action="store_true")
    p.add_argument("--possession", nargs="+", metavar="WORD",
                   help="possession markers (default: بتاع بتاعة بتوع)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("merge", help="union of two lists")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--name", default="MSA+ED")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("grid", help="run the experiment grid from a JSON config")
    p.add_argument("config")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("report", help="render a grid CSV as a text table")
    p.add_argument("report")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"edstop {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
