"""Graph ingestion: MatrixMarket parsing, compressed in-adjacency graphs, fixtures.

Vertex ids are zero-based internally and one-based on disk. Entry values in
``real``/``integer`` files are ignored: every stored entry is an unweighted
directed edge ``row -> col``. Duplicate entries collapse to a single edge and
self-loops are kept.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

SUPPORTED_FIELDS = ("pattern", "real", "integer")
SUPPORTED_SYMMETRIES = ("general", "symmetric")
FIXTURE_KINDS = ("cycle", "chain", "preferential")


class MatrixMarketError(ValueError):
    """Raised when a MatrixMarket stream is malformed or unsupported."""

    def __init__(self, line: int, cause: str):
        self.line = line
        self.cause = cause
        super().__init__(f"line {line}: {cause}")


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class EdgeList:
    """Directed edges over ``vertex_count`` vertices, sorted and deduplicated.

    ``edges`` is an ``(m, 2)`` int64 array of ``(source, target)`` rows in
    ascending lexicographic order. Build instances with :meth:`from_pairs`.
    """

    vertex_count: int
    edges: np.ndarray

    @classmethod
    def from_pairs(cls, vertex_count: int, pairs: Iterable[tuple[int, int]] | np.ndarray) -> "EdgeList":
        if vertex_count < 1:
            raise ValueError(f"vertex_count must be positive, got {vertex_count}")
        arr = np.asarray(pairs if isinstance(pairs, np.ndarray) else list(pairs), dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= vertex_count):
            raise ValueError(f"edge endpoint outside [0, {vertex_count})")
        if len(arr):
            arr = np.unique(arr, axis=0)
        return cls(vertex_count, _frozen(np.ascontiguousarray(arr)))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(s), int(t)) for s, t in self.edges]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EdgeList):
            return NotImplemented
        return self.vertex_count == other.vertex_count and np.array_equal(self.edges, other.edges)

    def __repr__(self) -> str:
        return f"EdgeList(vertex_count={self.vertex_count}, edge_count={self.edge_count})"


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable directed graph stored as transposed CSR (in-neighbor lists).

    Attributes:
        vertex_count: number of vertices N.
        in_offsets: length N+1; in-neighbors of v are
            ``in_neighbors[in_offsets[v]:in_offsets[v+1]]``, ascending.
        in_neighbors: concatenated in-neighbor lists.
        out_degree: out-degree of every vertex.
        dangling: ascending ids of vertices with no out-edges.
    """

    vertex_count: int
    in_offsets: np.ndarray
    in_neighbors: np.ndarray
    out_degree: np.ndarray
    dangling: np.ndarray

    @property
    def edge_count(self) -> int:
        return int(self.in_offsets[-1])

    def in_list(self, v: int) -> np.ndarray:
        return self.in_neighbors[self.in_offsets[v]:self.in_offsets[v + 1]]

    @cached_property
    def in_targets(self) -> np.ndarray:
        # target vertex of each stored in-edge, parallel to in_neighbors
        counts = np.diff(self.in_offsets)
        return _frozen(np.repeat(np.arange(self.vertex_count, dtype=np.int64), counts))

    def __repr__(self) -> str:
        return (f"Graph(vertex_count={self.vertex_count}, edge_count={self.edge_count}, "
                f"dangling={len(self.dangling)})")


def build_graph(edges: EdgeList) -> Graph:
    """Convert an :class:`EdgeList` into the kernel-ready :class:`Graph`."""
    n = edges.vertex_count
    if n < 1:
        raise ValueError("graph must have at least one vertex")
    src = edges.edges[:, 0]
    dst = edges.edges[:, 1]
    # order by (target, source) so each in-list comes out ascending
    order = np.lexsort((src, dst))
    in_neighbors = np.ascontiguousarray(src[order], dtype=np.int64)
    in_counts = np.bincount(dst, minlength=n).astype(np.int64)
    in_offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(in_counts, out=in_offsets[1:])
    out_degree = np.bincount(src, minlength=n).astype(np.int64)
    dangling = np.flatnonzero(out_degree == 0).astype(np.int64)
    return Graph(
        vertex_count=n,
        in_offsets=_frozen(in_offsets),
        in_neighbors=_frozen(in_neighbors),
        out_degree=_frozen(out_degree),
        dangling=_frozen(dangling),
    )


# --------------------------------------------------------------------------
# MatrixMarket

def _parse_index(token: str, lineno: int, name: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise MatrixMarketError(lineno, f"non-integer {name} index {token!r}") from None


def parse_matrix_market(text: str | TextIO) -> EdgeList:
    """Parse a MatrixMarket ``coordinate`` stream into an :class:`EdgeList`.

    Accepts fields ``pattern``, ``real`` and ``integer`` with symmetry
    ``general`` or ``symmetric``. Entry ``r c`` becomes edge ``(r-1, c-1)``;
    symmetric files also yield the mirrored edge for off-diagonal entries.
    Comment lines (``%``) may appear anywhere; blank lines are not allowed
    inside the entry block.

    Raises:
        MatrixMarketError: on any malformed or unsupported input. The error
            carries the 1-based line number and a short cause.
    """
    stream = io.StringIO(text) if isinstance(text, str) else text
    lines = iter(enumerate(stream, start=1))

    try:
        lineno, banner = next(lines)
    except StopIteration:
        raise MatrixMarketError(1, "missing banner") from None
    tokens = banner.split()
    if not tokens or tokens[0] != "%%MatrixMarket":
        raise MatrixMarketError(lineno, "missing or malformed banner")
    if len(tokens) != 5:
        raise MatrixMarketError(lineno, "malformed banner: expected 5 tokens")
    obj, fmt, fld, sym = (t.lower() for t in tokens[1:])
    if obj != "matrix":
        raise MatrixMarketError(lineno, f"unsupported object: {obj}")
    if fmt != "coordinate":
        raise MatrixMarketError(lineno, f"unsupported format: {fmt}")
    if fld not in SUPPORTED_FIELDS:
        raise MatrixMarketError(lineno, f"unsupported field: {fld}")
    if sym not in SUPPORTED_SYMMETRIES:
        raise MatrixMarketError(lineno, f"unsupported symmetry: {sym}")

    # size line: first line that is neither a comment nor blank
    for lineno, line in lines:
        stripped = line.strip()
        if stripped and not stripped.startswith("%"):
            break
    else:
        raise MatrixMarketError(lineno + 1, "missing size line")
    parts = stripped.split()
    if len(parts) != 3:
        raise MatrixMarketError(lineno, "size line must be 'rows cols nnz'")
    try:
        rows, cols, nnz = (int(p) for p in parts)
    except ValueError:
        raise MatrixMarketError(lineno, "non-integer value in size line") from None
    if rows < 1 or cols < 1 or nnz < 0:
        raise MatrixMarketError(lineno, "size line values out of range")

    width = 2 if fld == "pattern" else 3
    pairs: list[tuple[int, int]] = []
    seen = 0
    for lineno, line in lines:
        stripped = line.strip()
        if stripped.startswith("%"):
            continue
        if not stripped:
            if seen < nnz:
                raise MatrixMarketError(lineno, "blank line inside entry block")
            continue
        if seen == nnz:
            raise MatrixMarketError(lineno, f"more entries than declared nnz={nnz}")
        parts = stripped.split()
        if len(parts) != width:
            raise MatrixMarketError(lineno, f"expected {width} fields for {fld} entry, got {len(parts)}")
        r = _parse_index(parts[0], lineno, "row")
        c = _parse_index(parts[1], lineno, "column")
        if not 1 <= r <= rows:
            raise MatrixMarketError(lineno, f"row index {r} out of bounds [1, {rows}]")
        if not 1 <= c <= cols:
            raise MatrixMarketError(lineno, f"column index {c} out of bounds [1, {cols}]")
        pairs.append((r - 1, c - 1))
        if sym == "symmetric" and r != c:
            pairs.append((c - 1, r - 1))
        seen += 1
    if seen != nnz:
        raise MatrixMarketError(lineno + 1, f"entry count mismatch: declared {nnz}, found {seen}")

    return EdgeList.from_pairs(max(rows, cols), pairs)


def read_matrix_market(path: str | Path) -> EdgeList:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix_market(fh)


def write_matrix_market(edges: EdgeList) -> str:
    """Serialize as ``pattern general`` coordinate text (one-based)."""
    n = edges.vertex_count
    out = ["%%MatrixMarket matrix coordinate pattern general", f"{n} {n} {edges.edge_count}"]
    out.extend(f"{s + 1} {t + 1}" for s, t in edges.edges)
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# Deterministic fixtures

MASK64 = (1 << 64) - 1
SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
SPLITMIX_MUL1 = 0xBF58476D1CE4E5B9
SPLITMIX_MUL2 = 0x94D049BB133111EB

PA_MEAN_OUT_LINKS = 3
PA_RECIPROCAL_ONE_IN = 4


@dataclass
class SplitMix64:
    """SplitMix64 generator (Steele, Lea & Flood), pure integer arithmetic.

    ``next()`` advances the state by ``0x9E3779B97F4A7C15`` and mixes with
    ``z = (z ^ z>>30) * 0xBF58476D1CE4E5B9``, ``z = (z ^ z>>27) *
    0x94D049BB133111EB``, ``z ^ z>>31`` (all mod 2**64).
    """

    state: int = 0

    def __post_init__(self) -> None:
        self.state &= MASK64

    def next(self) -> int:
        self.state = (self.state + SPLITMIX_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * SPLITMIX_MUL1) & MASK64
        z = ((z ^ (z >> 27)) * SPLITMIX_MUL2) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Integer in ``[0, bound)`` by multiply-shift: ``(next() * bound) >> 64``."""
        return (self.next() * bound) >> 64


def _preferential(n: int, seed: int) -> list[tuple[int, int]]:
    # Growth process, vertex by vertex (v = 1 .. n-1):
    #   k = below(2*PA_MEAN_OUT_LINKS + 1) out-links, so 0..6 and some dangling;
    #   each target drawn uniformly from `pool`, which holds every existing
    #   vertex once plus once per in-edge received (in-degree + 1 weighting);
    #   at most 4k draws, repeats discarded;
    #   for each chosen target t (ascending): edge v->t, then with probability
    #   1/PA_RECIPROCAL_ONE_IN the back-link t->v.
    rng = SplitMix64(seed)
    pool = [0]
    edges: list[tuple[int, int]] = []
    for v in range(1, n):
        k = rng.below(2 * PA_MEAN_OUT_LINKS + 1)
        chosen: set[int] = set()
        for _ in range(4 * k):
            if len(chosen) == k:
                break
            chosen.add(pool[rng.below(len(pool))])
        for t in sorted(chosen):
            edges.append((v, t))
            pool.append(t)
            if rng.below(PA_RECIPROCAL_ONE_IN) == 0:
                edges.append((t, v))
                pool.append(v)
        pool.append(v)
    return edges


def generate_fixture(kind: str, n: int, seed: int = 0) -> EdgeList:
    """Deterministic synthetic graph.

    ``cycle``: i -> (i+1) mod n. ``chain``: i -> i+1, last vertex dangling.
    ``preferential``: directed preferential attachment driven by
    :class:`SplitMix64`; identical output on every platform for a given
    ``(n, seed)``. ``seed`` is ignored for cycle and chain.
    """
    if kind not in FIXTURE_KINDS:
        raise ValueError(f"unknown fixture kind {kind!r}; expected one of {', '.join(FIXTURE_KINDS)}")
    if n < 1:
        raise ValueError(f"fixture size must be positive, got {n}")
    if kind == "cycle":
        src = np.arange(n, dtype=np.int64)
        return EdgeList.from_pairs(n, np.stack([src, (src + 1) % n], axis=1))
    if kind == "chain":
        src = np.arange(n - 1, dtype=np.int64)
        return EdgeList.from_pairs(n, np.stack([src, src + 1], axis=1))
    if n < 2:
        raise ValueError("preferential fixture needs n >= 2")
    return EdgeList.from_pairs(n, _preferential(n, seed))


FIXTURE_SHORT_NAMES = {"cycle": "cycle", "chain": "chain", "preferential": "pa"}
_KIND_ALIASES = {"pa": "preferential", **{k: k for k in FIXTURE_KINDS}}


def parse_fixture_spec(spec: str) -> tuple[str, int, int]:
    """Parse ``kind,n[,seed]`` (``pa`` abbreviates ``preferential``)."""
    parts = [p.strip() for p in spec.split(",")]
    if len(parts) not in (2, 3) or parts[0] not in _KIND_ALIASES:
        raise ValueError(f"bad fixture spec {spec!r}; expected kind,n[,seed]")
    try:
        n = int(parts[1])
        seed = int(parts[2]) if len(parts) == 3 else 0
    except ValueError:
        raise ValueError(f"bad fixture spec {spec!r}; n and seed must be integers") from None
    return _KIND_ALIASES[parts[0]], n, seed


def fixture_name(kind: str, n: int, seed: int) -> str:
    return f"fixture-{FIXTURE_SHORT_NAMES[kind]}-{n}-{seed}"
