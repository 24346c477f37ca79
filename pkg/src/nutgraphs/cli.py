"""Command-line front end: generate, filter, check, stats.

Exit codes: 0 success, 1 usage error, 2 input parse error (or a non-nut fed
to ``stats``), 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from collections import Counter
from typing import Iterable, TextIO

from .generate import GenerationConstraints, generate
from .graph import Graph, Graph6Error, girth, is_bipartite, is_connected, min_degree, parse_graph6
from .nut import is_nut
from .stats import NotNutError, StatsTable, format_rational, nut_report

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INVARIANT = 0, 1, 2, 3


class InvariantError(RuntimeError):
    pass


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nutgraphs", description="Decide, generate and tabulate nut graphs.")
    p.add_argument(
        "--multi-prime",
        action="store_true",
        help="never take the single-prime shortcut (differential testing)",
    )
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="all nut graphs of one order")
    g.add_argument("--order", type=int, required=True)
    g.add_argument("--girth", type=int, help="minimum girth")
    g.add_argument("--max-degree", type=int)
    g.add_argument("--chemical", action="store_true", help="connected, maximum degree 3")
    g.add_argument("--stats", action="store_true", help="frequency table on stderr")
    g.add_argument("--tsv", action="store_true", help="tab-separated statistics")
    g.add_argument("--out", help="write graph6 here instead of stdout")
    g.add_argument("--mode", choices=("canonical", "dedup"), default="canonical")
    g.add_argument("--workers", type=_positive, help="default: $NUTGRAPHS_WORKERS or 1")

    f = sub.add_parser("filter", help="pass through the nut graphs of a graph6 stream")
    f.add_argument("--chemical", action="store_true")
    f.add_argument("--girth", type=int, help="minimum girth")
    f.add_argument("--summary", action="store_true", help="per-order totals on stderr")
    f.add_argument("--on-error", choices=("abort", "skip"), default="abort")

    c = sub.add_parser("check", help="report on a single graph")
    c.add_argument("graph6", nargs="?", help="default: first line of stdin")
    c.add_argument("--certificate", action="store_true", help="append the prime certificate")

    s = sub.add_parser("stats", help="frequency tables for a stream of nut graphs")
    s.add_argument("--tsv", action="store_true")
    return p


def _lines(stream: TextIO) -> Iterable[tuple[int, str]]:
    for i, raw in enumerate(stream, 1):
        line = raw.rstrip("\r\n")
        if line.strip():
            yield i, line


def _parse(lineno: int, line: str) -> Graph:
    try:
        return parse_graph6(line)
    except Graph6Error as exc:
        raise InputError(f"line {lineno}: {exc}") from None


def _check_generated(g: Graph, chemical: bool, report=None) -> None:
    if not is_connected(g) or is_bipartite(g) or min_degree(g) < 2:
        raise InvariantError(f"generated nut {g} fails a structural invariant")
    if chemical and report is not None and report.r < 2:
        raise InvariantError(f"chemical nut {g} has r = {report.r} < 2")


def cmd_generate(args, out: TextIO, err: TextIO) -> int:
    try:
        c = GenerationConstraints(
            args.order,
            min_girth=args.girth,
            max_degree=args.max_degree,
            chemical=args.chemical,
        )
    except ValueError as exc:
        err.write(f"nutgraphs: {exc}\n")
        return EXIT_USAGE
    table = StatsTable([c.order]) if args.stats else None
    counters: Counter = Counter()
    start = time.monotonic()
    sink = open(args.out, "w") if args.out else out
    count = 0
    try:
        for g in generate(
            c,
            mode=args.mode,
            workers=args.workers,
            counters=counters,
            multi_prime=args.multi_prime,
        ):
            rep = table.add_graph(g) if table is not None else None
            _check_generated(g, c.chemical, rep)
            sink.write(f"{g}\n")
            count += 1
    finally:
        if args.out:
            sink.close()
    elapsed = time.monotonic() - start
    err.write(f"order {c.order}: {count} nut graphs in {elapsed:.2f}s\n")
    for key in sorted(counters):
        err.write(f"  {key} {counters[key]}\n")
    if table is not None:
        err.write(table.render_tsv() if args.tsv else table.render_text())
    return EXIT_OK


def cmd_filter(args, inp: TextIO, out: TextIO, err: TextIO) -> int:
    read: Counter = Counter()
    kept: Counter = Counter()
    skipped = 0
    for lineno, line in _lines(inp):
        try:
            g = _parse(lineno, line)
        except InputError as exc:
            if args.on_error == "abort":
                raise
            err.write(f"nutgraphs: skipped {exc}\n")
            skipped += 1
            continue
        read[g.n] += 1
        if args.chemical and not (is_connected(g) and all(d <= 3 for d in g.degrees())):
            continue
        if args.girth is not None and girth(g) < args.girth:
            continue
        if is_nut(g, args.multi_prime):
            kept[g.n] += 1
            out.write(f"{line}\n")
    if args.summary:
        err.write("order\tread\tnuts\n")
        for n in sorted(read):
            err.write(f"{n}\t{read[n]}\t{kept[n]}\n")
        err.write(f"total\t{sum(read.values())}\t{sum(kept.values())}\n")
        if skipped:
            err.write(f"skipped\t{skipped}\n")
    return EXIT_OK


def render_check(g: Graph, multi_prime: bool = False, certificate: bool = False) -> str:
    cert = is_nut(g, multi_prime)
    lines = [f"graph6 {g}", f"order {g.n}"]
    if cert.nut:
        rep = nut_report(g)
        i = rep.inertia
        lines += [
            "verdict nut",
            f"kernel {' '.join(map(str, rep.kernel))}",
            f"r {format_rational(rep.r)}",
            f"inertia {i.n_plus} {i.n_zero} {i.n_minus}",
            f"nbo_offset {rep.nbo_offset}",
            f"delta_q {rep.delta_q}",
            f"girth {'inf' if rep.girth == math.inf else rep.girth}",
            f"chemical {'yes' if rep.chemical else 'no'}",
        ]
    else:
        lines.append(f"verdict not-nut {cert.reason.value}")
    text = "\n".join(lines) + "\n"
    if certificate:
        text += "certificate\n" + cert.dumps()
    return text


def cmd_check(args, inp: TextIO, out: TextIO) -> int:
    if args.graph6 is not None:
        g = _parse(1, args.graph6)
    else:
        first = next(iter(_lines(inp)), None)
        if first is None:
            raise InputError("no graph on standard input")
        g = _parse(*first)
    out.write(render_check(g, args.multi_prime, args.certificate))
    return EXIT_OK


def cmd_stats(args, inp: TextIO, out: TextIO) -> int:
    table = StatsTable()
    for lineno, line in _lines(inp):
        g = _parse(lineno, line)
        try:
            rep = table.add_graph(g)
        except NotNutError as exc:
            raise InputError(f"line {lineno}: not a nut graph ({exc})") from None
        if rep.chemical and rep.r < 2:
            raise InvariantError(f"line {lineno}: chemical nut with r = {rep.r}")
    if len(table):
        out.write(table.render_tsv() if args.tsv else table.render_text())
    return EXIT_OK


def main(argv: list[str] | None = None, stdin=None, stdout=None, stderr=None) -> int:
    inp = stdin or sys.stdin
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "generate":
            return cmd_generate(args, out, err)
        if args.command == "filter":
            return cmd_filter(args, inp, out, err)
        if args.command == "check":
            return cmd_check(args, inp, out)
        return cmd_stats(args, inp, out)
    except InputError as exc:
        err.write(f"nutgraphs: {exc}\n")
        return EXIT_PARSE
    except InvariantError as exc:
        err.write(f"nutgraphs: invariant violated: {exc}\n")
        return EXIT_INVARIANT
    except BrokenPipeError:  # pragma: no cover
        return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
