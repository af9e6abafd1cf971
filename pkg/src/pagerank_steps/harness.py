"""Damping-schedule sweep: one row per (steps, alpha_start) test case, CSV and SVG output."""

from __future__ import annotations

import csv
import io
import logging
from xml.sax.saxutils import escape
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from .graph import Graph
from .pagerank import ConvergenceParams
from .schedule import RunStats, make_schedule, run_scheduled

log = logging.getLogger(__name__)

DEFAULT_ALPHA_STARTS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)
DEFAULT_STEP_COUNTS = (0, 1, 2, 3, 4)

CSV_HEADER = ("graph", "steps", "alpha_start", "alpha_final", "tolerance",
              "phase_alphas", "phase_iterations", "total_iterations", "converged")


@dataclass(frozen=True)
class SweepConfig:
    graph_name: str = "graph"
    alpha_final: float = 0.85
    alpha_start_values: tuple[float, ...] = DEFAULT_ALPHA_STARTS
    step_counts: tuple[int, ...] = DEFAULT_STEP_COUNTS
    tolerance: float = 1e-5
    max_iterations: int = 500

    def __post_init__(self) -> None:
        bad = [a for a in self.alpha_start_values if not 0.0 < a < self.alpha_final]
        if bad:
            raise ValueError(f"alpha_start values must lie in (0, alpha_final={self.alpha_final}): {bad}")
        if any(s < 0 for s in self.step_counts):
            raise ValueError("step counts must be non-negative")
        ConvergenceParams(self.tolerance, self.max_iterations)
        for steps, alpha_start in self.cases():
            make_schedule(steps, alpha_start, self.alpha_final)

    @property
    def params(self) -> ConvergenceParams:
        return ConvergenceParams(self.tolerance, self.max_iterations)

    def cases(self) -> list[tuple[int, float | None]]:
        """Test cases in output order: the 0-step baseline, then (steps, alpha_start) ascending."""
        out: list[tuple[int, float | None]] = []
        if 0 in self.step_counts:
            out.append((0, None))
        for steps in sorted(set(self.step_counts) - {0}):
            out.extend((steps, a) for a in sorted(self.alpha_start_values))
        return out


@dataclass(frozen=True)
class SweepRow:
    graph_name: str
    steps: int
    alpha_start: float | None
    alpha_final: float
    tolerance: float
    phase_alphas: tuple[float, ...]
    phase_iterations: tuple[int, ...]
    total_iterations: int
    converged: bool

    @classmethod
    def from_stats(cls, graph_name: str, stats: RunStats) -> "SweepRow":
        sched = stats.schedule
        return cls(graph_name, sched.steps, sched.alpha_start, sched.alpha_final, stats.tolerance,
                   sched.phases, stats.phase_iterations, stats.total_iterations, stats.converged)


def sweep(graph: Graph, config: SweepConfig = SweepConfig(), workers: int = 1,
          on_row: Callable[[SweepRow], None] | None = None) -> list[SweepRow]:
    """Run every test case of ``config`` on ``graph``.

    With ``workers > 1`` cases run on a thread pool against the shared graph;
    rows still come back in case order. ``on_row`` sees each row in that order.
    """
    params = config.params

    def run_case(case: tuple[int, float | None]) -> SweepRow:
        steps, alpha_start = case
        stats = run_scheduled(graph, make_schedule(steps, alpha_start, config.alpha_final), params)
        return SweepRow.from_stats(config.graph_name, stats)

    cases = config.cases()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_case, cases))
    else:
        rows = [run_case(c) for c in cases]
    for row in rows:
        if not row.converged:
            log.warning("%s steps=%d alpha_start=%s did not converge", row.graph_name, row.steps, row.alpha_start)
        if on_row is not None:
            on_row(row)
    return rows


def fmt_real(x: float) -> str:
    return f"{x:.6g}"


def row_fields(row: SweepRow) -> list[str]:
    return [
        row.graph_name,
        str(row.steps),
        "" if row.steps == 0 or row.alpha_start is None else fmt_real(row.alpha_start),
        fmt_real(row.alpha_final),
        fmt_real(row.tolerance),
        ";".join(fmt_real(a) for a in row.phase_alphas),
        ";".join(str(i) for i in row.phase_iterations),
        str(row.total_iterations),
        "true" if row.converged else "false",
    ]


def emit_csv(rows: Sequence[SweepRow]) -> str:
    if not rows:
        raise ValueError("no rows to emit")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(row_fields(r) for r in rows)
    return buf.getvalue()


def format_log_line(row: SweepRow) -> str:
    f = dict(zip(CSV_HEADER, row_fields(row)))
    return " ".join(f"{k}={v or '-'}" for k, v in f.items())


# --------------------------------------------------------------------------
# SVG chart

SERIES_COLORS = ("#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7")

_W, _H = 720, 400
_LEFT, _RIGHT, _TOP, _BOTTOM = 60, 130, 40, 50


def _n(x: float) -> str:
    return f"{x:.2f}"


def _tick_step(vmax: float) -> int:
    for step in (1, 2, 5, 10, 20, 25, 50, 100, 200, 250, 500, 1000, 2000, 5000):
        if vmax / step <= 8:
            return step
    return 10_000


def emit_svg_chart(rows: Sequence[SweepRow]) -> str:
    """Grouped bar chart of total iterations: x = alpha_start, one series per step count.

    Stepped rows become ``<rect class="bar">`` elements; the 0-step total is a
    single ``<line class="reference">``. Output is a pure function of ``rows``.
    """
    baseline = next((r for r in rows if r.steps == 0), None)
    stepped = [r for r in rows if r.steps > 0]
    alphas = sorted({r.alpha_start for r in stepped})
    series = sorted({r.steps for r in stepped})

    vmax = max([r.total_iterations for r in rows] + [1])
    tick = _tick_step(vmax)
    ymax = tick * -(-vmax // tick)
    plot_w = _W - _LEFT - _RIGHT
    plot_h = _H - _TOP - _BOTTOM

    def y(v: float) -> float:
        return _TOP + plot_h * (1 - v / ymax)

    svg: list[str] = []
    svg.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
               f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="11">')
    svg.append(f'<rect class="background" x="0" y="0" width="{_W}" height="{_H}" fill="white"/>')
    title = "Iterations vs initial damping factor"
    if rows:
        title += f" ({escape(rows[0].graph_name)}, final {fmt_real(rows[0].alpha_final)})"
    svg.append(f'<text x="{_W // 2}" y="20" text-anchor="middle" font-size="13">{title}</text>')

    for v in range(0, int(ymax) + 1, tick):
        yy = _n(y(v))
        svg.append(f'<path class="grid" d="M{_LEFT} {yy}H{_LEFT + plot_w}" stroke="#ddd"/>')
        svg.append(f'<text x="{_LEFT - 6}" y="{yy}" text-anchor="end" dominant-baseline="middle">{v}</text>')
    svg.append(f'<path class="axis" d="M{_LEFT} {_TOP}V{_TOP + plot_h}H{_LEFT + plot_w}" stroke="black" fill="none"/>')
    svg.append(f'<text x="{_LEFT + plot_w / 2:.1f}" y="{_H - 10}" text-anchor="middle">damping_start</text>')
    svg.append(f'<text x="14" y="{_TOP + plot_h / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 14 {_TOP + plot_h / 2:.1f})">iterations</text>')

    if alphas:
        group_w = plot_w / len(alphas)
        bar_w = group_w * 0.8 / len(series)
        totals = {(r.steps, r.alpha_start): r for r in stepped}
        for gi, a in enumerate(alphas):
            gx = _LEFT + gi * group_w
            svg.append(f'<text x="{_n(gx + group_w / 2)}" y="{_TOP + plot_h + 16}" '
                       f'text-anchor="middle">{fmt_real(a)}</text>')
            for si, steps in enumerate(series):
                row = totals.get((steps, a))
                if row is None:
                    continue
                color = SERIES_COLORS[si % len(SERIES_COLORS)]
                x = gx + group_w * 0.1 + si * bar_w
                top = y(row.total_iterations)
                svg.append(f'<rect class="bar" data-steps="{steps}" data-alpha-start="{fmt_real(a)}" '
                           f'x="{_n(x)}" y="{_n(top)}" width="{_n(bar_w)}" height="{_n(_TOP + plot_h - top)}" '
                           f'fill="{color}"><title>{steps}-step, start {fmt_real(a)}: '
                           f'{row.total_iterations}</title></rect>')

    if baseline is not None:
        yy = _n(y(baseline.total_iterations))
        svg.append(f'<line class="reference" x1="{_LEFT}" y1="{yy}" x2="{_LEFT + plot_w}" y2="{yy}" '
                   f'stroke="black" stroke-dasharray="6 3"/>')

    lx = _W - _RIGHT + 12
    for si, steps in enumerate(series):
        ly = _TOP + 10 + si * 18
        svg.append(f'<rect class="legend" x="{lx}" y="{ly}" width="12" height="12" '
                   f'fill="{SERIES_COLORS[si % len(SERIES_COLORS)]}"/>')
        svg.append(f'<text x="{lx + 18}" y="{ly + 10}">{steps}-step</text>')
    if baseline is not None:
        ly = _TOP + 10 + len(series) * 18 + 6
        svg.append(f'<path class="legend" d="M{lx} {ly}H{lx + 12}" stroke="black" stroke-dasharray="3 2"/>')
        svg.append(f'<text x="{lx + 18}" y="{ly + 4}">0-step ({baseline.total_iterations})</text>')
    svg.append("</svg>")
    return "\n".join(svg) + "\n"
