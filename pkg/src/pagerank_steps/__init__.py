"""PageRank with stepwise adjustment of the damping factor."""

__version__ = "0.1.0"

from .graph import (
    EdgeList,
    Graph,
    MatrixMarketError,
    build_graph,
    generate_fixture,
    parse_matrix_market,
    read_matrix_market,
)
from .harness import SweepConfig, SweepRow, emit_csv, emit_svg_chart, sweep
from .oracle import solve_exact
from .pagerank import (
    ConvergenceParams,
    PhaseOutcome,
    iterate_once,
    l1_delta,
    pagerank,
    run_to_convergence,
    uniform_ranks,
)
from .schedule import (
    DampingSchedule,
    RunStats,
    estimate_iterations,
    make_schedule,
    round_half_away,
    run_scheduled,
)
