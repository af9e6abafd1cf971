"""Pull-based PageRank power iteration with uniform teleport and dangling redistribution.

Rank vectors are plain float64 numpy arrays of length N summing to 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

DEFAULT_TOLERANCE = 1e-5
DEFAULT_MAX_ITERATIONS = 500


@dataclass(frozen=True)
class ConvergenceParams:
    tolerance: float = DEFAULT_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS

    def __post_init__(self) -> None:
        if not 0.0 < self.tolerance < 1.0:
            raise ValueError(f"tolerance must lie in (0, 1), got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")


@dataclass(frozen=True, eq=False)
class PhaseOutcome:
    """Result of iterating at one damping factor until convergence or the cap."""

    alpha: float
    iterations: int
    converged: bool
    final_delta: float
    ranks: np.ndarray


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"damping factor must lie in (0, 1), got {alpha}")
    return alpha


def uniform_ranks(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError(f"rank vector length must be positive, got {n}")
    return np.full(n, 1.0 / n)


def l1_delta(a: np.ndarray, b: np.ndarray) -> float:
    """Sum of absolute differences between two rank vectors."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return float(np.abs(np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)).sum())


def _step(graph: Graph, ranks: np.ndarray, alpha: float) -> np.ndarray:
    n = graph.vertex_count
    dangling_mass = float(ranks[graph.dangling].sum())
    # dangling vertices never appear as in-neighbors, so 0/0 is never evaluated
    share = ranks[graph.in_neighbors] / graph.out_degree[graph.in_neighbors]
    # bincount accumulates sequentially in input order: ascending target,
    # then ascending in-neighbor within each target
    pulled = np.bincount(graph.in_targets, weights=share, minlength=n)
    return (1.0 - alpha) / n + alpha * (dangling_mass / n + pulled)


def iterate_once(graph: Graph, ranks: np.ndarray, alpha: float) -> np.ndarray:
    """One power-iteration step.

    ``r'[v] = (1-alpha)/N + alpha * (D/N + sum(r[u] / out_degree[u] for u in in(v)))``
    where ``D`` is the rank mass currently held by dangling vertices.
    """
    alpha = check_alpha(alpha)
    ranks = np.asarray(ranks, dtype=np.float64)
    if ranks.shape != (graph.vertex_count,):
        raise ValueError(f"rank vector has shape {ranks.shape}, graph has {graph.vertex_count} vertices")
    return _step(graph, ranks, alpha)


def run_to_convergence(graph: Graph, initial: np.ndarray, alpha: float,
                       params: ConvergenceParams = ConvergenceParams()) -> PhaseOutcome:
    """Iterate from ``initial`` until the L1 change of one step drops below the tolerance.

    ``iterations`` counts every step applied, including the one that met the
    criterion. Hitting ``max_iterations`` first is reported through
    ``converged=False`` with the last iterate as ``ranks``.
    """
    alpha = check_alpha(alpha)
    ranks = np.asarray(initial, dtype=np.float64)
    if ranks.shape != (graph.vertex_count,):
        raise ValueError(f"rank vector has shape {ranks.shape}, graph has {graph.vertex_count} vertices")
    delta = float("inf")
    for k in range(1, params.max_iterations + 1):
        new = _step(graph, ranks, alpha)
        delta = l1_delta(new, ranks)
        ranks = new
        if delta < params.tolerance:
            return PhaseOutcome(alpha, k, True, delta, ranks)
    return PhaseOutcome(alpha, params.max_iterations, False, delta, ranks)


def pagerank(graph: Graph, alpha: float = 0.85,
             params: ConvergenceParams = ConvergenceParams()) -> PhaseOutcome:
    """Fixed-damping PageRank from the uniform vector."""
    return run_to_convergence(graph, uniform_ranks(graph.vertex_count), alpha, params)


def top_ranked(ranks: np.ndarray, k: int = 10) -> list[tuple[int, float]]:
    """``k`` highest-ranked vertices, ties broken by ascending id."""
    order = np.lexsort((np.arange(len(ranks)), -ranks))[:k]
    return [(int(v), float(ranks[v])) for v in order]
