"""Command-line entry point: ``zeromem gen|run|verify|synth|circumference|report``.

Exit codes: 0 success, 1 failed check, 2 usage error, 3 undecided (a
resource cap was hit).
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

from . import graph as gr
from .adversary import CSV_HEADER, DEFAULT_MAX_STATES, DecisionCache, verify_all
from .algorithms import get_strategy, strategy_names
from .model import ScriptChooser, SeededChooser, Strategy, colors_used, run
from .synthesis import format_table, load_table, synthesize

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- corpora

_RANGE = re.compile(r"^(\d+)\.\.(\d+)$")
_BOUND = re.compile(r"^n\s*(<=|==)\s*(\d+)$")


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    graph: gr.Graph


def _sizes(spec: str) -> range:
    m = _BOUND.match(spec)
    if m:
        hi = int(m.group(2))
        return range(1 if m.group(1) == "<=" else hi, hi + 1)
    if spec.isdigit():
        return range(int(spec), int(spec) + 1)
    m = _RANGE.match(spec)
    if m and int(m.group(1)) <= int(m.group(2)):
        return range(int(m.group(1)), int(m.group(2)) + 1)
    raise UsageError(f"bad size spec {spec!r}; use K, n<=K, n==K or A..B")


def corpus(spec: str, dedup: bool = False, circumference_max: int | None = None) -> Iterator[CorpusEntry]:
    """Expand a corpus spec.

    ``trees:<sizes>``, ``connected:<sizes>``, ``<family>:<sizes>`` for the
    one-parameter families (path, cycle, complete, star, squarepath, fan,
    doublefan, cliqueleaves), or ``file:<path>[,<path>...]``.  Sizes are
    ``K``, ``n<=K``, ``n==K`` or ``A..B``.
    """
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise UsageError(f"bad corpus {spec!r}")
    entries: Iterator[CorpusEntry]
    if kind == "file":
        entries = (CorpusEntry(p, gr.read_graph(p)) for p in rest.split(","))
    elif kind == "trees":
        entries = (
            CorpusEntry(f"tree{n}-{i}", g)
            for n in _sizes(rest)
            for i, g in enumerate(gr.enumerate_trees(n))
        )
    elif kind == "connected":
        tag = "iso" if dedup else "conn"
        entries = (
            CorpusEntry(f"{tag}{n}-{i}", g)
            for n in _sizes(rest)
            for i, g in enumerate(gr.enumerate_connected_graphs(n, dedup=dedup))
        )
    elif kind in gr.FAMILIES and len(gr.FAMILIES[kind][1]) == 1:
        param = gr.FAMILIES[kind][1][0]
        entries = (
            CorpusEntry(f"{kind}{n}", gr.build_family(kind, **{param: n})) for n in _sizes(rest)
        )
    else:
        raise UsageError(f"unknown corpus kind {kind!r}")
    for e in entries:
        if circumference_max is None or gr.circumference(e.graph) <= circumference_max:
            yield e


def resolve_strategy(name: str) -> Strategy:
    if name.startswith("table:"):
        return load_table(name[6:])
    try:
        return get_strategy(name)
    except KeyError as exc:
        raise UsageError(f"{exc.args[0]}; known: {', '.join(strategy_names())}, table:<file>")


# ---------------------------------------------------------------- commands


def cmd_gen(a: argparse.Namespace) -> int:
    params = {p: getattr(a, p) for p in ("n", "m", "i", "j", "k", "r", "leaves")}
    built = gr.build_family(a.family, **params)
    if isinstance(built, tuple):
        built = built[a.which - 1]
    text = gr.format_graph(built)
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    if a.dot:
        Path(a.dot).write_text(gr.to_dot(built))
    return EXIT_OK


def _parse_script(text: str) -> list[int]:
    try:
        return [int(t) for t in re.split(r"[,\s]+", text.strip()) if t]
    except ValueError:
        raise UsageError(f"bad script {text!r}; expected comma-separated indices")


def cmd_run(a: argparse.Namespace) -> int:
    g = gr.read_graph(a.graph)
    strat = resolve_strategy(a.strategy)
    if not 0 <= a.start < g.n:
        raise UsageError(f"start {a.start} outside 0..{g.n - 1}")
    if a.script is not None:
        chooser = ScriptChooser(_parse_script(a.script))
    elif a.adversary == "first":
        chooser = ScriptChooser()
    elif a.adversary.startswith("seeded:"):
        chooser = SeededChooser(int(a.adversary[7:]))
    else:
        raise UsageError(f"bad adversary {a.adversary!r}; use first or seeded:<seed>")
    try:
        trace, outcome = run(g, strat, a.start, chooser, a.step_cap, graph_name=a.graph)
    except ValueError as exc:
        raise UsageError(str(exc))
    sys.stdout.write(trace.render())
    print(f"outcome={outcome.kind} colors={colors_used(trace)}", file=sys.stderr)
    if a.dot and trace.final is not None:
        Path(a.dot).write_text(gr.to_dot(g, trace.final.coloring))
    return EXIT_OK if outcome.kind == "Success" else EXIT_FAIL


def _verify_corpus(a: argparse.Namespace):
    strat = resolve_strategy(a.strategy)
    cache = DecisionCache(strat)
    for e in corpus(a.corpus, a.dedup, a.circumference_max):
        starts = None
        if a.starts == "leaves":
            starts = [v for v in range(e.graph.n) if e.graph.degree(v) <= 1]
        yield e, verify_all(e.graph, strat, a.max_states, None, e.name, cache, starts)


def _exit_for(verdicts, max_colors: int | None) -> tuple[int, str]:
    failed = [v for v in verdicts if v.overall == "FailureWitness"]
    unknown = [v for v in verdicts if v.overall == "Unknown"]
    worst = max((v.max_colors or 0 for v in verdicts), default=0)
    over = [v for v in verdicts if max_colors is not None and (v.max_colors or 0) > max_colors]
    summary = (
        f"graphs={len(verdicts)} failed={len(failed)} unknown={len(unknown)} "
        f"max_colors={worst} over_budget={len(over)}"
    )
    if failed or over:
        return EXIT_FAIL, summary
    if unknown:
        return EXIT_UNKNOWN, summary
    return EXIT_OK, summary


def cmd_verify(a: argparse.Namespace) -> int:
    verdicts = []
    rows = []
    for e, v in _verify_corpus(a):
        verdicts.append(v)
        rows.extend(v.csv_rows())
        w = v.witness
        if w is not None and a.witness_dir:
            out = Path(a.witness_dir)
            out.mkdir(parents=True, exist_ok=True)
            gpath = out / f"{e.name}.g"
            gpath.write_text(gr.format_graph(e.graph))
            w.trace.graph_name = str(gpath)
            (out / f"{e.name}.s{w.start}.trace").write_text(w.trace.render())
            (out / f"{e.name}.s{w.start}.script").write_text(",".join(map(str, w.script)) + "\n")
    text = "\n".join([CSV_HEADER] + rows) + "\n"
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    code, summary = _exit_for(verdicts, a.max_colors)
    print(summary, file=sys.stderr)
    return code


def cmd_report(a: argparse.Namespace) -> int:
    """One line per graph instead of one per start."""
    verdicts = []
    lines = ["graph_id,n,m,verdict,states,max_colors"]
    for e, v in _verify_corpus(a):
        verdicts.append(v)
        mc = "" if v.max_colors is None else v.max_colors
        lines.append(f"{e.name},{e.graph.n},{e.graph.m},{v.overall},{v.states},{mc}")
    code, summary = _exit_for(verdicts, a.max_colors)
    lines.append(f"# {summary}")
    text = "\n".join(lines) + "\n"
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def cmd_synth(a: argparse.Namespace) -> int:
    graphs = [gr.read_graph(p) for p in a.graphs]
    res = synthesize(
        graphs,
        a.budget,
        recoloring=a.recoloring,
        lemma_pruning=a.prune,
        max_nodes=a.max_nodes,
        time_limit=a.time_limit,
    )
    verified = ""
    if res.realizable:
        strat = res.strategy()
        ok = all(verify_all(g, strat).all_succeed for g in graphs)
        verified = " verified=" + ("yes" if ok else "NO")
        if a.table_out:
            Path(a.table_out).write_text(format_table(res.table, a.budget, a.recoloring))
        if not ok:
            print(f"status={res.status} nodes={res.nodes}{verified}")
            return EXIT_FAIL
    print(f"status={res.status} nodes={res.nodes} seconds={res.elapsed:.2f}{verified}")
    if res.detail:
        print(f"detail={res.detail}", file=sys.stderr)
    if res.status == "Unknown":
        return EXIT_UNKNOWN
    if a.expect and res.status.lower() != a.expect:
        return EXIT_FAIL
    return EXIT_OK


def cmd_circumference(a: argparse.Namespace) -> int:
    print(gr.circumference(gr.read_graph(a.graph)))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zeromem", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a generated graph")
    g.add_argument("--family", required=True, choices=sorted(gr.FAMILIES))
    for name in ("n", "m", "i", "j", "k", "r", "leaves"):
        g.add_argument(f"--{name}", type=int)
    g.add_argument("--which", type=int, choices=(1, 2), default=1, help="graph of a pair")
    g.add_argument("--out")
    g.add_argument("--dot")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="execute one strategy run and print its trace")
    r.add_argument("--graph", required=True)
    r.add_argument("--strategy", required=True)
    r.add_argument("--start", type=int, default=0)
    r.add_argument("--script", help="choice indices at branch points, e.g. 1,0,2")
    r.add_argument("--adversary", default="first", help="first | seeded:<seed>")
    r.add_argument("--step-cap", type=int)
    r.add_argument("--dot", help="write the final colouring as DOT")
    r.set_defaults(func=cmd_run)

    for name, func, helptext in (
        ("verify", cmd_verify, "exhaustively verify a strategy on a corpus (CSV per start)"),
        ("report", cmd_report, "like verify, one CSV row per graph"),
    ):
        v = sub.add_parser(name, help=helptext)
        v.add_argument("--corpus", required=True)
        v.add_argument("--strategy", required=True)
        v.add_argument("--max-colors", type=int)
        v.add_argument("--dedup", action="store_true", help="one graph per isomorphism class")
        v.add_argument("--circumference-max", type=int)
        v.add_argument("--starts", choices=("all", "leaves"), default="all")
        v.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
        v.add_argument("--out")
        if name == "verify":
            v.add_argument("--witness-dir", help="dump failing traces and scripts here")
        v.set_defaults(func=func)

    s = sub.add_parser("synth", help="search for a strategy within a colour budget")
    s.add_argument("--graphs", nargs="+", required=True)
    s.add_argument("--budget", type=int, required=True)
    s.add_argument("--recoloring", action="store_true")
    s.add_argument("--prune", action="store_true", help="uniform-setting pruning rules")
    s.add_argument("--expect", choices=("realizable", "unrealizable"))
    s.add_argument("--table-out")
    s.add_argument("--max-nodes", type=int, default=5_000_000)
    s.add_argument("--time-limit", type=float)
    s.set_defaults(func=cmd_synth)

    c = sub.add_parser("circumference", help="print the longest cycle length")
    c.add_argument("--graph", required=True)
    c.set_defaults(func=cmd_circumference)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, gr.GraphError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
