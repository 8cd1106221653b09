"""Graph containers, pre-processing, and instance generation.

Every solver in this package operates on a :class:`Graph`: a simple
undirected graph in compressed (CSR-style) adjacency form with vertices
relabeled to a dense ``0..n-1`` range. The original labels survive in
``external_ids`` so solutions can be reported against the input files.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np


class EmptyInstanceError(ValueError):
    """Raised when pre-processing leaves no usable vertices."""


class GenerationFailureError(RuntimeError):
    """Raised when random generation keeps producing disconnected graphs."""


@dataclass(frozen=True, eq=False)
class RawEdgeList:
    """Verbatim edge records (duplicates and loops preserved) after dense relabeling.

    ``edges`` holds one row per input record using dense ids; ``external_ids``
    maps dense id -> original id (ascending in original id).
    """

    edges: np.ndarray         # shape (k, 2), int64, dense ids
    external_ids: np.ndarray  # shape (n,), int64, sorted ascending

    @property
    def n_mentioned(self) -> int:
        return len(self.external_ids)


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph over vertices ``0..n-1`` in CSR adjacency form.

    Invariants: neighbor lists are strictly sorted (no loops, no multi-edges),
    adjacency is symmetric, ``degrees.sum() == 2 * m``, and after
    pre-processing every vertex has degree >= 1.
    """

    n: int
    m: int
    indptr: np.ndarray        # int32, len n + 1
    indices: np.ndarray       # int32, len 2m, sorted within each row
    degrees: np.ndarray       # int32, len n
    external_ids: np.ndarray  # int64, len n

    @classmethod
    def from_edges(cls, n: int, edges: np.ndarray, external_ids: np.ndarray | None = None) -> Graph:
        """Build from unique undirected edge pairs (u != v, each pair once)."""
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        m = len(edges)
        if external_ids is None:
            external_ids = np.arange(n, dtype=np.int64)
        if m == 0:
            indptr = np.zeros(n + 1, dtype=np.int32)
            return cls(n, 0, indptr, np.zeros(0, dtype=np.int32),
                       np.zeros(n, dtype=np.int32), np.asarray(external_ids, dtype=np.int64))
        both = np.concatenate([edges, edges[:, ::-1]])
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        indices = both[:, 1].astype(np.int32)
        degrees = np.bincount(both[:, 0], minlength=n).astype(np.int32)
        indptr = np.zeros(n + 1, dtype=np.int32)
        np.cumsum(degrees, out=indptr[1:])
        return cls(n, m, indptr, indices, degrees, np.asarray(external_ids, dtype=np.int64))

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edge_pairs(self) -> np.ndarray:
        """All undirected edges as (u, v) rows with u < v."""
        src = np.repeat(np.arange(self.n, dtype=np.int32), self.degrees)
        mask = src < self.indices
        return np.column_stack([src[mask], self.indices[mask]])

    def validate(self) -> None:
        """Check all structural invariants; raises AssertionError on violation."""
        assert self.indptr[0] == 0 and self.indptr[-1] == 2 * self.m
        assert int(self.degrees.sum()) == 2 * self.m
        for v in range(self.n):
            row = self.neighbors(v)
            assert np.all(np.diff(row) > 0), f"row {v} not strictly sorted"
            assert v not in row, f"loop at {v}"
        pairs = self.edge_pairs()
        rev = {(int(u), int(w)) for u, w in pairs}
        for v in range(self.n):
            for u in self.neighbors(v):
                key = (min(v, int(u)), max(v, int(u)))
                assert key in rev, f"asymmetric edge {v}-{u}"


@dataclass(frozen=True, eq=False)
class RequirementVector:
    """Per-vertex activation thresholds, one integer per vertex."""

    values: np.ndarray  # int32

    @classmethod
    def checked(cls, g: Graph, values) -> RequirementVector:
        """Validate ``1 <= r[v] <= degree(v)`` for the given graph."""
        values = np.asarray(values, dtype=np.int32)
        if len(values) != g.n:
            raise ValueError(f"requirement vector length {len(values)} != n {g.n}")
        if np.any(values < 1):
            bad = int(np.flatnonzero(values < 1)[0])
            raise ValueError(f"requirement below 1 at vertex {bad}; "
                             "pre-activated vertices must be normalized away first")
        if np.any(values > g.degrees):
            bad = int(np.flatnonzero(values > g.degrees)[0])
            raise ValueError(f"requirement {int(values[bad])} exceeds degree "
                             f"{int(g.degrees[bad])} at vertex {bad}")
        return cls(values)


@dataclass(frozen=True)
class PreprocessReport:
    vertices_before: int
    vertices_after: int
    edges_before: int
    edges_after: int
    multi_edges_removed: int
    loops_removed: int
    isolated_removed: int
    max_degree: int

    def as_dict(self) -> dict:
        return {
            "vertices_before": self.vertices_before,
            "vertices_after": self.vertices_after,
            "edges_before": self.edges_before,
            "edges_after": self.edges_after,
            "multi_edges_removed": self.multi_edges_removed,
            "loops_removed": self.loops_removed,
            "isolated_removed": self.isolated_removed,
            "max_degree": self.max_degree,
        }


def preprocess(raw: RawEdgeList) -> tuple[Graph, PreprocessReport]:
    """Clean raw edge records into a simple graph.

    Drops loops, collapses duplicate/parallel records to one undirected edge,
    deletes degree-0 vertices, and relabels the survivors densely. The report
    records every delta plus the maximum degree of the result.
    """
    n_raw = raw.n_mentioned
    edges = raw.edges
    records = len(edges)
    loops = edges[:, 0] == edges[:, 1]
    loops_removed = int(loops.sum())
    edges = edges[~loops]
    if len(edges):
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        unique = np.unique(np.column_stack([lo, hi]), axis=0)
    else:
        unique = np.zeros((0, 2), dtype=np.int64)
    multi_removed = len(edges) - len(unique)

    degrees = np.bincount(unique.ravel(), minlength=n_raw) if len(unique) else np.zeros(n_raw, dtype=np.int64)
    kept = np.flatnonzero(degrees > 0)
    isolated_removed = n_raw - len(kept)
    if len(kept) == 0:
        raise EmptyInstanceError("no vertices remain after pre-processing")

    relabel = np.full(n_raw, -1, dtype=np.int64)
    relabel[kept] = np.arange(len(kept))
    g = Graph.from_edges(len(kept), relabel[unique], raw.external_ids[kept])
    report = PreprocessReport(
        vertices_before=n_raw,
        vertices_after=g.n,
        edges_before=records,
        edges_after=g.m,
        multi_edges_removed=multi_removed,
        loops_removed=loops_removed,
        isolated_removed=isolated_removed,
        max_degree=int(g.degrees.max()),
    )
    return g, report


def is_connected(g: Graph) -> bool:
    """Breadth-first reachability check from vertex 0."""
    if g.n == 0:
        return False
    if np.any(g.degrees == 0):
        return g.n == 1
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    reached = 1
    while queue:
        v = queue.popleft()
        for u in g.neighbors(v):
            if not seen[u]:
                seen[u] = True
                reached += 1
                queue.append(int(u))
    return reached == g.n


def generate_random_graph(n: int, q: float, seed, max_retries: int = 1000) -> Graph:
    """Sample a connected G(n, q) graph; disconnected draws are redrawn.

    Each of the C(n, 2) potential edges is included independently with
    probability ``q``. Deterministic given ``seed``. Raises
    :class:`GenerationFailureError` after ``max_retries`` disconnected draws.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    for _ in range(max_retries):
        mask = rng.random(len(iu)) < q
        g = Graph.from_edges(n, np.column_stack([iu[mask], ju[mask]]))
        if is_connected(g):
            return g
    raise GenerationFailureError(
        f"no connected draw for n={n}, q={q} after {max_retries} attempts")


def random_requirements(g: Graph, seed) -> RequirementVector:
    """Draw r[v] uniformly from {1, ..., degree(v)} per vertex."""
    if np.any(g.degrees < 1):
        raise ValueError("graph has isolated vertices; preprocess first")
    rng = np.random.default_rng(seed)
    values = rng.integers(1, g.degrees.astype(np.int64) + 1, dtype=np.int64)
    return RequirementVector(values.astype(np.int32))


def capped_requirements(g: Graph, cap: int) -> RequirementVector:
    """r[v] = min(degree(v), cap)."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    return RequirementVector(np.minimum(g.degrees, cap).astype(np.int32))


@dataclass(frozen=True, eq=False)
class NormalizedInstance:
    """Instance after stripping pre-activated (threshold 0) vertices.

    ``graph`` is None when the free activations already dominate everything.
    ``kept`` maps the reduced instance's vertex ids back to the original ones.
    """

    graph: Graph | None
    requirements: RequirementVector | None
    kept: np.ndarray           # original internal ids surviving, ascending
    pre_dominated: np.ndarray  # original internal ids dominated for free


def normalize_instance(g: Graph, values) -> NormalizedInstance:
    """Reduce an instance whose thresholds may contain zeros.

    Vertices with threshold 0 activate unconditionally; their activation is
    propagated first and every dominated vertex is removed, leaving a valid
    sub-instance with residual thresholds (1 <= r <= degree holds again).
    Solutions of the sub-instance are solutions of the original instance.
    """
    values = np.asarray(values, dtype=np.int32)
    if len(values) != g.n:
        raise ValueError(f"requirement vector length {len(values)} != n {g.n}")
    if np.any(values < 0):
        raise ValueError("negative requirement")
    if np.any(values > g.degrees):
        bad = int(np.flatnonzero(values > g.degrees)[0])
        raise ValueError(f"requirement {int(values[bad])} exceeds degree "
                         f"{int(g.degrees[bad])} at vertex {bad}")

    zeros = np.flatnonzero(values == 0)
    if len(zeros) == 0:
        all_ids = np.arange(g.n, dtype=np.int64)
        return NormalizedInstance(g, RequirementVector(values), all_ids,
                                  np.zeros(0, dtype=np.int64))

    from .propagation import new_state  # local import; propagation has no graph dep

    # The kernel never self-activates a threshold-0 vertex, but here every
    # such vertex is seeded explicitly, so the cascade below is exact.
    state = new_state(g, RequirementVector(values))
    for v in zeros:
        state.propagate(int(v))
    dominated = np.asarray(state.dominated).astype(bool)
    kept = np.flatnonzero(~dominated).astype(np.int64)
    if len(kept) == 0:
        return NormalizedInstance(None, None, kept, np.flatnonzero(dominated).astype(np.int64))

    relabel = np.full(g.n, -1, dtype=np.int64)
    relabel[kept] = np.arange(len(kept))
    pairs = g.edge_pairs()
    live = ~dominated[pairs[:, 0]] & ~dominated[pairs[:, 1]]
    sub = Graph.from_edges(len(kept), relabel[pairs[live]], g.external_ids[kept])
    residual = np.asarray(state.residual_requirement)[kept].astype(np.int32)
    return NormalizedInstance(sub, RequirementVector.checked(sub, residual), kept,
                              np.flatnonzero(dominated).astype(np.int64))
