"""Initial population: three construction methods per worker.

Worker p builds (a) a rank-randomized run of the reference discard
heuristic, (b) a degree-biased greedy cover, and (c) the intersection of
the two repaired back to feasibility. Distinct methods seed the population
with structurally different solutions.
"""
from __future__ import annotations

import numpy as np

from .graph import Graph, RequirementVector
from .individual import Individual
from .propagation import new_state
from .sampling import roulette_pick, worker_rng


def construct_s2_greedy(g: Graph, r: RequirementVector, state, rng) -> Individual:
    """Degree-biased greedy: pick undominated vertices until everything is.

    Accepts a fresh or partially propagated state and returns only its own
    picks, so it doubles as the completion step for partially repaired sets.
    Every pick dominates at least itself, so the loop terminates.
    """
    bits = np.zeros(g.n, dtype=np.uint8)
    residual_degree = np.asarray(state.residual_degree)
    while state.undominated_count > 0:
        candidates = state.undominated_vertices()
        weights = residual_degree[candidates] / state.undominated_count
        x = int(candidates[roulette_pick(weights, rng)])
        bits[x] = 1
        state.propagate(x)
    return Individual(bits)


def _discard_score(residual_threshold: np.ndarray, residual_degree: np.ndarray) -> np.ndarray:
    """Case-3 ranking of the reference heuristic.

    Kept behind one function so the expression can be adjusted against the
    published source without touching callers. Callers guarantee
    residual_degree >= 1 for every scored vertex.
    """
    d = residual_degree.astype(np.float64)
    return residual_threshold / (d * (d + 1.0))


def construct_s1_reference(g: Graph, r: RequirementVector, p: int, rng) -> Individual:
    """Discard heuristic with the case-3 argmax widened to a top-p window.

    Iteratively removes vertices from the live set: a vertex whose residual
    threshold reached 0 is discarded as activated (case 1); a vertex that can
    no longer gather enough live neighbors joins the target set (case 2);
    otherwise the discard candidate is drawn uniformly from the p
    highest-scoring vertices (case 3). With p = 1 the procedure is the
    deterministic original and consumes no randomness.
    """
    if p < 1:
        raise ValueError("worker rank must be >= 1")
    n = g.n
    threshold = r.values.astype(np.int64)
    degree = g.degrees.astype(np.int64)
    alive = np.ones(n, dtype=bool)
    bits = np.zeros(n, dtype=np.uint8)
    remaining = n
    while remaining > 0:
        activated = alive & (threshold <= 0)
        if activated.any():
            v = int(np.flatnonzero(activated)[0])
            lower_thresholds = True
        else:
            starved = alive & (degree < threshold)
            if starved.any():
                v = int(np.flatnonzero(starved)[0])
                bits[v] = 1
                lower_thresholds = True
            else:
                live = np.flatnonzero(alive)
                scores = _discard_score(threshold[live], degree[live])
                order = np.argsort(-scores, kind="stable")
                window = live[order[:min(p, len(live))]]
                v = int(window[0] if len(window) == 1 else window[rng.integers(len(window))])
                lower_thresholds = False
        for u in g.neighbors(v):
            if not alive[u]:
                continue
            degree[u] -= 1
            if lower_thresholds and threshold[u] > 0:
                threshold[u] -= 1
        alive[v] = False
        remaining -= 1
    return Individual(bits)


def construct_s3_mix(s1: Individual, s2: Individual, g: Graph,
                     r: RequirementVector, rng) -> Individual:
    """Intersect two feasible solutions and repair back to feasibility.

    Members already dominated when their turn comes are dropped as
    redundant; any remaining gap is closed by the greedy constructor
    continuing from the partially propagated state.
    """
    bits = (s1.bits & s2.bits).astype(np.uint8)
    state = new_state(g, r)
    dominated = np.asarray(state.dominated)
    for v in np.flatnonzero(bits):
        v = int(v)
        if dominated[v]:
            bits[v] = 0
        else:
            state.propagate(v)
    if state.undominated_count > 0:
        extra = construct_s2_greedy(g, r, state, rng)
        bits |= extra.bits
    return Individual(bits)


def build_initial_generation(g: Graph, r: RequirementVector, workers: int,
                             master_seed: int, executor=None) -> list[Individual]:
    """Construct the 3 * workers members of the starting generation.

    Each worker runs on its own derived random stream, so the result is
    reproducible for a given (seed, worker count) however it is scheduled.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")

    def build_one(p: int) -> list[Individual]:
        rng = worker_rng(master_seed, 0, p)
        s1 = construct_s1_reference(g, r, p, rng)
        s2 = construct_s2_greedy(g, r, new_state(g, r), rng)
        s3 = construct_s3_mix(s1, s2, g, r, rng)
        return [s1, s2, s3]

    ranks = range(1, workers + 1)
    if executor is None:
        triples = [build_one(p) for p in ranks]
    else:
        triples = list(executor.map(build_one, ranks))
    return [ind for triple in triples for ind in triple]
