"""Stepwise damping schedules and the closed-form iteration estimate."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .pagerank import (
    ConvergenceParams,
    PhaseOutcome,
    check_alpha,
    run_to_convergence,
    uniform_ranks,
)


@dataclass(frozen=True)
class DampingSchedule:
    """Damping factors applied one after another, each run to convergence.

    A ``steps``-step schedule has ``steps + 1`` evenly spaced phases from the
    start value to the final one; the 0-step schedule is the single final value.
    """

    phases: tuple[float, ...]
    steps: int

    @property
    def alpha_start(self) -> float | None:
        return self.phases[0] if self.steps else None

    @property
    def alpha_final(self) -> float:
        return self.phases[-1]


def make_schedule(steps: int, alpha_start: float | None, alpha_final: float) -> DampingSchedule:
    alpha_final = check_alpha(alpha_final)
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    if steps == 0:
        return DampingSchedule((alpha_final,), 0)
    if alpha_start is None:
        raise ValueError("alpha_start is required for steps >= 1")
    alpha_start = check_alpha(alpha_start)
    if alpha_start >= alpha_final:
        raise ValueError(f"alpha_start ({alpha_start}) must be below alpha_final ({alpha_final})")
    gap = (alpha_final - alpha_start) / steps
    phases = [alpha_start + i * gap for i in range(steps)]
    phases.append(alpha_final)
    if any(a >= b for a, b in zip(phases, phases[1:])):
        raise ValueError(f"alpha_start and alpha_final too close to space {steps} steps")
    return DampingSchedule(tuple(phases), steps)


@dataclass(frozen=True, eq=False)
class RunStats:
    schedule: DampingSchedule
    tolerance: float
    phase_iterations: tuple[int, ...]
    total_iterations: int
    converged: bool
    final_ranks: np.ndarray
    outcomes: tuple[PhaseOutcome, ...]


def run_scheduled(graph: Graph, schedule: DampingSchedule,
                  params: ConvergenceParams = ConvergenceParams()) -> RunStats:
    """Run each phase to convergence, warm-starting from the previous phase's ranks."""
    ranks = uniform_ranks(graph.vertex_count)
    outcomes = []
    for alpha in schedule.phases:
        outcome = run_to_convergence(graph, ranks, alpha, params)
        outcomes.append(outcome)
        ranks = outcome.ranks
    iterations = tuple(o.iterations for o in outcomes)
    return RunStats(
        schedule=schedule,
        tolerance=params.tolerance,
        phase_iterations=iterations,
        total_iterations=sum(iterations),
        converged=all(o.converged for o in outcomes),
        final_ranks=ranks,
        outcomes=tuple(outcomes),
    )


def estimate_iterations(tolerance: float, alpha: float) -> float:
    """Power-method iterations to reach ``tolerance`` when error shrinks like ``alpha**k``."""
    for name, value in (("tolerance", tolerance), ("alpha", alpha)):
        if not 0.0 < value < 1.0:
            raise ValueError(f"{name} must lie in (0, 1), got {value}")
    return math.log10(tolerance) / math.log10(alpha)


def round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))
