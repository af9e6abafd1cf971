"""Command line entry point: ``run``, ``sweep`` and ``estimate`` subcommands.

Exit codes: 0 success (non-converged runs included), 1 usage error,
2 input or parse error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path

from . import __version__
from .graph import (
    Graph,
    MatrixMarketError,
    build_graph,
    fixture_name,
    generate_fixture,
    parse_fixture_spec,
    read_matrix_market,
)
from .harness import SweepConfig, emit_csv, emit_svg_chart, format_log_line, sweep
from .pagerank import ConvergenceParams, pagerank, top_ranked
from .schedule import estimate_iterations, round_half_away

EXIT_USAGE = 1
EXIT_INPUT = 2


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_real_list(text: str) -> tuple[float, ...]:
    """``start:stop:step`` (inclusive, decimal-exact) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (Decimal(p) for p in text.split(":"))
            if step <= 0 or stop < start:
                raise UsageError(f"bad range {text!r}")
            count = int((stop - start) / step) + 1
            return tuple(float(start + i * step) for i in range(count))
        return tuple(float(Decimal(p)) for p in text.split(","))
    except (InvalidOperation, ValueError):
        raise UsageError(f"bad list of reals {text!r}") from None


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"bad list of integers {text!r}") from None


def load_graph(args: argparse.Namespace) -> tuple[str, Graph]:
    if args.fixture:
        try:
            kind, n, seed = parse_fixture_spec(args.fixture)
            edges = generate_fixture(kind, n, seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return fixture_name(kind, n, seed), build_graph(edges)
    path = Path(args.graph)
    try:
        edges = read_matrix_market(path)
    except MatrixMarketError as exc:
        raise InputError(f"{path}: {exc}") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise InputError(f"{path}: not a text file") from None
    return path.stem, build_graph(edges)


def _params(args: argparse.Namespace) -> ConvergenceParams:
    try:
        return ConvergenceParams(args.tolerance, args.max_iter)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_run(args: argparse.Namespace) -> int:
    params = _params(args)
    name, graph = load_graph(args)
    try:
        out = pagerank(graph, args.alpha, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"graph: {name} ({graph.vertex_count} vertices, {graph.edge_count} edges, "
          f"{len(graph.dangling)} dangling)")
    print(f"alpha: {args.alpha:.6g}")
    print(f"tolerance: {params.tolerance:.6g}")
    print(f"iterations: {out.iterations}")
    print(f"converged: {'true' if out.converged else 'false'}")
    print(f"final_delta: {out.final_delta:.6g}")
    print(f"top {min(args.top, graph.vertex_count)} (vertex ids are 0-based):")
    for pos, (v, score) in enumerate(top_ranked(out.ranks, args.top), start=1):
        print(f"  {pos:>3}  {v:>8}  {score:.9f}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    params = _params(args)
    name, graph = load_graph(args)
    try:
        config = SweepConfig(
            graph_name=name,
            alpha_final=args.alpha_final,
            alpha_start_values=parse_real_list(args.alpha_start),
            step_counts=parse_int_list(args.steps),
            tolerance=params.tolerance,
            max_iterations=params.max_iterations,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    on_row = (lambda row: print(format_log_line(row), flush=True)) if args.log else None
    rows = sweep(graph, config, workers=args.workers, on_row=on_row)
    _write(args.csv, emit_csv(rows))
    if args.svg:
        _write(args.svg, emit_svg_chart(rows))
    return 0


def _write(target: str, text: str) -> None:
    if target == "-":
        sys.stdout.write(text)
        return
    try:
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"{target}: {exc.strerror or exc}") from None


def cmd_estimate(args: argparse.Namespace) -> int:
    try:
        value = estimate_iterations(args.tolerance, args.alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"estimate: {value:.6f}")
    print(f"rounded: {round_half_away(value)}")
    return 0


def cmd_exact(args: argparse.Namespace) -> int:
    from .oracle import solve_exact

    name, graph = load_graph(args)
    try:
        ranks = solve_exact(graph, args.alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"graph: {name}")
    for pos, (v, score) in enumerate(top_ranked(ranks, args.top), start=1):
        print(f"  {pos:>3}  {v:>8}  {score:.12f}")
    return 0


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", metavar="PATH", help="MatrixMarket coordinate file")
    src.add_argument("--fixture", metavar="KIND,N[,SEED]",
                     help="synthetic graph: cycle, chain or preferential (pa), e.g. pa,1000,42")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pagerank-steps",
                     description="PageRank with stepwise damping-factor schedules.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser,
                                metavar="{run,sweep,estimate}")

    p = sub.add_parser("run", help="single fixed-damping PageRank computation")
    _add_graph_source(p)
    p.add_argument("--alpha", type=float, default=0.85)
    p.add_argument("--tolerance", type=float, default=1e-5)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--top", type=int, default=10, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="iterations for every (steps, alpha_start) schedule")
    _add_graph_source(p)
    p.add_argument("--alpha-final", type=float, default=0.85)
    p.add_argument("--alpha-start", default="0.1:0.8:0.1", metavar="START:STOP:STEP|A,B,...")
    p.add_argument("--steps", default="0,1,2,3,4", metavar="K,K,...")
    p.add_argument("--tolerance", type=float, default=1e-5)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--csv", required=True, metavar="PATH", help="CSV output path, '-' for stdout")
    p.add_argument("--svg", metavar="PATH", help="optional grouped bar chart")
    p.add_argument("--log", action="store_true", help="print one line of stats per test case")
    p.add_argument("--workers", type=int, default=1, help="threads used to run test cases")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("estimate", help="closed-form iteration estimate log(tol)/log(alpha)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--tolerance", type=float, required=True)
    p.set_defaults(func=cmd_estimate)

    # oracle debugging aid, deliberately left out of --help
    p = sub.add_parser("exact")
    _add_graph_source(p)
    p.add_argument("--alpha", type=float, default=0.85)
    p.add_argument("--top", type=int, default=10)
    p.set_defaults(func=cmd_exact)
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "exact"]
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pagerank-steps: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"pagerank-steps: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
