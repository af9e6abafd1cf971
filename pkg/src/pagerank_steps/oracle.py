"""Reference PageRank by dense direct solve, independent of the iteration code.

Only meant for small graphs: the operator is materialized as an N x N matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

MAX_ORACLE_VERTICES = 2000


class SingularSystemError(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """``G = alpha * (P^T + (1/N) 1 d^T)`` with P row-stochastic over out-edges
    and d the dangling indicator. Column u holds what vertex u passes on."""

    n: int
    matrix: np.ndarray


def dense_operator(graph: Graph, alpha: float) -> DenseOperator:
    n = graph.vertex_count
    g = np.zeros((n, n))
    # walk the graph edge by edge rather than reusing the kernel's arrays
    for v in range(n):
        for u in graph.in_list(v):
            g[v, u] += alpha / graph.out_degree[u]
    for u in graph.dangling:
        g[:, u] = alpha / n
    return DenseOperator(n, g)


def gauss_solve(a: np.ndarray, b: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """Solve ``a x = b`` by Gaussian elimination with partial pivoting.

    Inputs are copied, not modified.
    """
    a = np.array(a, dtype=np.float64)
    x = np.array(b, dtype=np.float64)
    n = len(x)
    scale = np.abs(a).max() if a.size else 0.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= tol * scale:
            raise SingularSystemError(f"matrix is numerically singular at column {k}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            x[[k, p]] = x[[p, k]]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(factors, a[k, k:])
        x[k + 1:] -= factors * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x


def solve_exact(graph: Graph, alpha: float) -> np.ndarray:
    """Stationary ranks from ``(I - G) r = ((1 - alpha)/N) 1``."""
    n = graph.vertex_count
    if n > MAX_ORACLE_VERTICES:
        raise ValueError(f"oracle limited to {MAX_ORACLE_VERTICES} vertices, graph has {n}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"damping factor must lie in (0, 1), got {alpha}")
    g = dense_operator(graph, alpha).matrix
    r = gauss_solve(np.eye(n) - g, np.full(n, (1.0 - alpha) / n))
    total = r.sum()
    if abs(total - 1.0) > 1e-12:
        r = r / total
    return r
