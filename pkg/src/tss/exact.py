"""Exact minimum target set solvers: pruned backtracking and brute force.

The backtracking search enumerates solutions as increasing-label vertex
sequences, extends only with currently undominated vertices, and cuts any
branch that cannot beat the incumbent. Start vertices are dealt round-robin
to workers sharing the incumbent size; a final sequential pass reconstructs
the lexicographically first optimal solution so the reported set is
independent of worker count and scheduling.
"""
from __future__ import annotations

import itertools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import Graph, RequirementVector
from .individual import Individual
from .propagation import new_state
from .sampling import worker_rng
from .seeding import construct_s2_greedy

DEFAULT_BACKTRACK_LIMIT = 60
BRUTE_FORCE_LIMIT = 20


class InstanceTooLargeError(ValueError):
    """Instance exceeds the exact-solver bound; use the GA instead."""


@dataclass(frozen=True)
class ExactResult:
    size: int
    vertices: np.ndarray  # internal ids, ascending
    individual: Individual


class _SharedBound:
    """Monotone upper bound shared across search workers."""

    def __init__(self, value: int):
        self.value = value
        self._lock = threading.Lock()

    def tighten(self, value: int) -> None:
        with self._lock:
            if value < self.value:
                self.value = value


def _candidates_above(state, last: int) -> np.ndarray:
    undominated = state.undominated_vertices()
    cut = np.searchsorted(undominated, last, side="right")
    return undominated[cut:]


def _search_size(state, seq_len: int, last: int, bound: _SharedBound) -> None:
    """Depth-first size search; only the shared bound is recorded."""
    if state.undominated_count == 0:
        bound.tighten(seq_len)
        return
    if seq_len + 1 >= bound.value:
        return
    for v in _candidates_above(state, last):
        v = int(v)
        child = state.copy()
        child.propagate(v)
        _search_size(child, seq_len + 1, v, bound)


def _reconstruct(state, prefix: list[int], last: int, best: int) -> list[int] | None:
    """Left-most depth-first walk for the first solution of the known size."""
    if state.undominated_count == 0:
        return prefix
    if len(prefix) + 1 > best:
        return None
    for v in _candidates_above(state, last):
        v = int(v)
        child = state.copy()
        child.propagate(v)
        found = _reconstruct(child, prefix + [v], v, best)
        if found is not None:
            return found
    return None


def exact_backtracking(g: Graph, r: RequirementVector, workers: int | None = None,
                       max_n: int = DEFAULT_BACKTRACK_LIMIT) -> ExactResult:
    """Provably minimum target set for desk-scale instances.

    Raises :class:`InstanceTooLargeError` above ``max_n``. The returned set
    is the lexicographically first optimum, identical for any worker count.
    """
    if g.n > max_n:
        raise InstanceTooLargeError(
            f"n={g.n} exceeds the exact bound {max_n}; "
            "use the genetic solver for instances this large")
    workers = max(int(workers or 1), 1)

    # A greedy solution seeds the incumbent so cutting starts immediately.
    base = new_state(g, r)
    greedy = construct_s2_greedy(g, r, base.copy(), worker_rng(0, 0, 0))
    bound = _SharedBound(greedy.size)

    starts = list(range(g.n))
    lanes = [starts[k::workers] for k in range(workers)]

    def explore(lane: list[int]) -> None:
        for v in lane:
            if 1 >= bound.value:
                return
            child = base.copy()
            child.propagate(v)
            _search_size(child, 1, v, bound)

    if workers == 1:
        explore(lanes[0])
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(explore, lanes))

    best = bound.value
    solution: list[int] | None = None
    for v in starts:
        child = base.copy()
        child.propagate(v)
        solution = _reconstruct(child, [v], v, best)
        if solution is not None:
            break
    assert solution is not None and len(solution) == best
    vertices = np.asarray(sorted(solution), dtype=np.int64)
    return ExactResult(best, vertices, Individual.from_vertices(g.n, vertices))


def brute_force(g: Graph, r: RequirementVector, max_n: int = BRUTE_FORCE_LIMIT) -> int:
    """Minimum feasible cardinality by subset enumeration (test oracle)."""
    if g.n > max_n:
        raise InstanceTooLargeError(f"n={g.n} exceeds the brute-force bound {max_n}")
    state = new_state(g, r)
    for k in range(1, g.n + 1):
        for combo in itertools.combinations(range(g.n), k):
            state.reset()
            for v in combo:
                state.propagate(v)
            if state.undominated_count == 0:
                return k
    return g.n  # the full vertex set always dominates
