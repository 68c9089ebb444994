"""Command-line entry point.

Machine-readable results go to stdout (one line, or CSV for experiments);
``--verbose`` details go to stderr. Exit codes: 0 success, 1 invalid input,
2 budget exhausted or otherwise unknown, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

from . import experiments as ex
from .cyclic_order import color_short_cycles, short_cycle_bound
from .degeneracy import degeneracy_coloring
from .digraph import (
    DEFAULT_BUDGET,
    Digraph,
    MultiDigraph,
    circumference,
    cycle_length_set,
    digirth,
    format_digraph,
    format_multidigraph,
    parse_digraph,
    parse_multidigraph,
    strongly_connected_components,
)
from .errors import BudgetExceeded, DichromaError, RejectionFailed
from .exact import (
    dichromatic_number,
    format_lists,
    is_list_colorable,
    is_valid_coloring,
    max_acyclic_set,
    num_colors,
    read_lists,
    respects_lists,
)
from .generators import (
    FIXTURES,
    classify,
    layered_tournament,
    modular_blowup,
    random_tournament,
    sample_binomial_oriented,
    sample_directed_configuration,
    sample_regular,
)

EXIT_OK, EXIT_INVALID, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 64

_EXPERIMENT_KINDS = {
    "orientedness": "orientedness",
    "greedy-scaling": "greedy-scaling",
    "r1-cycles": "r1-cycles",
    "abk": "abk-probe",
    "upper-consistency": "upper-bound-consistency",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


class _Context:
    def __init__(self, args, stdout, stderr):
        self.args = args
        self.stdout = stdout
        self.stderr = stderr

    def verbose(self, msg: str) -> None:
        if self.args.verbose:
            print(msg, file=self.stderr)

    def emit(self, text_line: str, payload: dict) -> None:
        if self.args.format == "json":
            print(json.dumps(payload, sort_keys=True), file=self.stdout)
        else:
            print(text_line, file=self.stdout)


# ------------------------------------------------------------ input / output

def _read_text(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path, encoding="ascii") as fh:
        return fh.read()


def _load_any(path: str | None) -> Digraph | MultiDigraph:
    text = _read_text(path)
    if text.lstrip().startswith("MULTIDIGRAPH"):
        return parse_multidigraph(text)
    return parse_digraph(text)


def _load_simple(path: str | None) -> Digraph:
    g = _load_any(path)
    if isinstance(g, Digraph):
        return g
    if g.loop_vertices():
        raise ValueError("input has loops; this command needs a loop-free digraph")
    return g.simplify()


def _write_graph(ctx: _Context, g) -> None:
    text = format_multidigraph(g) if isinstance(g, MultiDigraph) else format_digraph(g)
    out = ctx.args.out
    if out in (None, "-"):
        ctx.stdout.write(text)
    else:
        with open(out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    ctx.verbose(f"wrote {type(g).__name__} with n={g.n} m={g.m}")


def _join(values) -> str:
    return " ".join(str(v) for v in values)


def _seed(args) -> int:
    return 0 if args.seed is None else args.seed


# ------------------------------------------------------------ gen

def _gen(ctx: _Context) -> int:
    a = ctx.args
    what = a.what
    if what == "config-model":
        _, g = sample_directed_configuration(a.n, a.r, _seed(a))
    elif what == "regular":
        g = sample_regular(a.n, a.r, a.mode, _seed(a), a.max_tries)
    elif what == "binomial":
        g = sample_binomial_oriented(a.n, a.p, _seed(a))
    elif what == "tournament":
        g = random_tournament(a.n, _seed(a))
    elif what == "layered":
        g = layered_tournament(a.n, a.s, _seed(a), verify_blocks=a.verify_blocks, budget=a.budget)
    elif what == "blowup":
        g, lists = modular_blowup(a.k, a.t)
        if a.lists:
            with open(a.lists, "w", encoding="ascii", newline="\n") as fh:
                fh.write(format_lists(lists))
    elif what == "fixture":
        g = FIXTURES[a.name]()
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown generator {what}")
    _write_graph(ctx, g)
    return EXIT_OK


# ------------------------------------------------------------ solve

def _solve(ctx: _Context) -> int:
    a = ctx.args
    if a.what == "alpha":
        g = _load_any(a.inp)
        best = max_acyclic_set(g, a.budget)
        ctx.verbose(f"maximum acyclic set: {_join(best)}")
        ctx.emit(str(len(best)), {"alpha": len(best), "set": best})
        return EXIT_OK
    d = _load_simple(a.inp)
    if a.what == "chi":
        k, colors = dichromatic_number(d, a.budget)
        ctx.verbose(f"coloring: {_join(colors)}")
        ctx.emit(str(k), {"chi": k, "coloring": colors})
        return EXIT_OK
    if a.lists is None:
        raise UsageError("solve listcheck requires --lists")
    lists = read_lists(a.lists)
    try:
        colors = is_list_colorable(d, lists, a.budget)
    except BudgetExceeded as err:
        ctx.verbose(str(err))
        ctx.emit("UNKNOWN", {"result": "unknown"})
        return EXIT_UNKNOWN
    if colors is None:
        ctx.emit("NOT L-COLORABLE", {"result": "not-colorable"})
    else:
        ctx.verbose(f"coloring: {_join(colors)}")
        ctx.emit("L-COLORABLE", {"result": "colorable", "coloring": colors})
    return EXIT_OK


# ------------------------------------------------------------ color

def _color(ctx: _Context) -> int:
    a = ctx.args
    d = _load_simple(a.inp)
    lists = read_lists(a.lists) if a.lists else None
    if a.what == "degeneracy":
        k = a.k if a.k is not None else len(cycle_length_set(d, a.budget))
        colors = degeneracy_coloring(d, k, lists)
        bound = k + 1
    else:
        if lists is not None:
            raise UsageError("color short-cycles does not take --lists")
        colors = color_short_cycles(d, a.budget)
        bound = short_cycle_bound(d, a.budget)
    valid = is_valid_coloring(d, colors) and (lists is None or respects_lists(colors, lists))
    count = num_colors(colors)
    ctx.verbose(f"{count} colors (bound {bound}), {'valid' if valid else 'INVALID'}")
    ctx.emit(
        f"{'VALID' if valid else 'INVALID'} colors={count} coloring={','.join(map(str, colors))}",
        {"valid": valid, "colors": count, "bound": bound, "coloring": colors},
    )
    return EXIT_OK if valid else EXIT_INVALID


# ------------------------------------------------------------ analyze

def _analyze(ctx: _Context) -> int:
    a = ctx.args
    if a.what == "classify":
        g = _load_any(a.inp)
        if isinstance(g, Digraph):
            g = MultiDigraph.from_arcs(g.n, g.arcs())
        rep = classify(g)
        ctx.emit(
            f"loops={rep.loops} parallel={rep.parallel_arcs} digons={rep.digons} "
            f"oriented={'yes' if rep.oriented else 'no'}",
            {"loops": rep.loops, "parallel_arcs": rep.parallel_arcs, "digons": rep.digons, "oriented": rep.oriented},
        )
        return EXIT_OK
    d = _load_simple(a.inp)
    if a.what == "scc":
        comps = strongly_connected_components(d)
        ctx.emit(" | ".join(_join(c) for c in comps), {"components": comps})
    elif a.what == "digirth":
        g = digirth(d)
        ctx.emit("acyclic" if g is None else str(g), {"digirth": g})
    elif a.what == "circumference":
        s = circumference(d, a.budget)
        ctx.emit("acyclic" if s is None else str(s), {"circumference": s})
    else:
        lengths = sorted(cycle_length_set(d, a.budget))
        ctx.emit(_join(lengths) if lengths else "acyclic", {"cycle_lengths": lengths})
    return EXIT_OK


# ------------------------------------------------------------ experiment

def _experiment(ctx: _Context) -> int:
    a = ctx.args
    cfg = ex.ExperimentConfig(
        kind=_EXPERIMENT_KINDS[a.what],
        ns=a.n,
        rs=a.r or (),
        ps=a.p or (),
        samples=a.samples,
        seed=_seed(a),
        output=None if a.out in (None, "-") else a.out,
        model=a.model,
        max_tries=a.max_tries,
        budget=a.budget,
        workers=a.workers,
    )
    result = ex.run_experiment(cfg)
    if cfg.output is None:
        ctx.stdout.write(ex.records_to_csv(result.records))
    for row in result.summary:
        ctx.verbose(json.dumps(row, sort_keys=True))
    for note in result.notes:
        ctx.verbose(f"note: {note}")
    return EXIT_OK


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--in", dest="inp", metavar="PATH", help="input file (default stdin)")
    common.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    common.add_argument("--seed", type=int, help="master seed (default 0)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node budget")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--verbose", "-v", action="store_true", help="details on stderr")

    parser = _Parser(prog="dichroma", description="Acyclic sets and dichromatic numbers of digraphs.")
    top = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = top.add_parser("gen", help="generate a digraph").add_subparsers(dest="what", required=True)
    p = gen.add_parser("config-model", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p = gen.add_parser("regular", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--mode", choices=("multi", "simple", "oriented"), default="oriented")
    p.add_argument("--max-tries", type=int, default=100_000)
    p = gen.add_parser("binomial", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p = gen.add_parser("tournament", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p = gen.add_parser("layered", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--verify-blocks", action="store_true")
    p = gen.add_parser("blowup", parents=[common])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--lists", metavar="PATH", help="also write the list assignment here")
    p = gen.add_parser("fixture", parents=[common])
    p.add_argument("name", choices=sorted(FIXTURES))

    solve = top.add_parser("solve", help="exact solvers").add_subparsers(dest="what", required=True)
    solve.add_parser("alpha", parents=[common])
    solve.add_parser("chi", parents=[common])
    p = solve.add_parser("listcheck", parents=[common])
    p.add_argument("--lists", metavar="PATH", required=True)

    color = top.add_parser("color", help="acyclic colourings").add_subparsers(dest="what", required=True)
    p = color.add_parser("degeneracy", parents=[common])
    p.add_argument("--k", type=int, help="degeneracy (default: number of distinct cycle lengths)")
    p.add_argument("--lists", metavar="PATH")
    p = color.add_parser("short-cycles", parents=[common])
    p.add_argument("--lists", metavar="PATH", help=argparse.SUPPRESS)

    analyze = top.add_parser("analyze", help="structural queries").add_subparsers(dest="what", required=True)
    for name in ("scc", "digirth", "circumference", "cycles", "classify"):
        analyze.add_parser(name, parents=[common])

    exp = top.add_parser("experiment", help="Monte Carlo experiments").add_subparsers(dest="what", required=True)
    for name in _EXPERIMENT_KINDS:
        p = exp.add_parser(name, parents=[common])
        p.add_argument("--n", type=int, nargs="+", required=True)
        p.add_argument("--r", type=int, nargs="+")
        p.add_argument("--p", type=float, nargs="+")
        p.add_argument("--samples", type=int, default=100)
        p.add_argument("--model", choices=("oriented", "config"), default="oriented")
        p.add_argument("--max-tries", type=int, default=100_000)
        p.add_argument("--workers", type=int, help="worker processes (default $DICHROMA_THREADS or 1)")
    return parser


_HANDLERS = {"gen": _gen, "solve": _solve, "color": _color, "analyze": _analyze, "experiment": _experiment}


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](_Context(args, stdout, stderr))
    except UsageError as err:
        print(err, file=stderr)
        return EXIT_USAGE
    except (BudgetExceeded, RejectionFailed) as err:
        print(f"unknown: {err}", file=stderr)
        return EXIT_UNKNOWN
    except (DichromaError, ValueError, OSError) as err:
        print(f"invalid input: {err}", file=stderr)
        return EXIT_INVALID


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
