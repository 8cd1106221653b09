"""Reproduction operators, mutation, repair, and the per-worker dispatcher.

Fourteen operators feed each new generation; every child then passes
through :func:`optimize_individual`, which doubles as feasibility repair
and redundancy pruning, so operators are free to emit infeasible bit
vectors. Operators never mutate their parents.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .census import CensusStore
from .fitness import EvaluatedGeneration, GaWeights
from .graph import Graph, RequirementVector
from .individual import Individual
from .propagation import new_state
from .sampling import roulette_pick

OPERATOR_LABELS = {
    1: "one_point", 2: "two_point", 3: "random_cut", 4: "uniform",
    5: "and", 6: "or", 7: "not", 8: "rand_and", 9: "rand_or",
    10: "average", 11: "consensus", 12: "swap", 13: "rebuild",
    14: "force_mutate",
}
N_OPERATORS = 14


@dataclass
class ReproductionContext:
    """Frozen inputs one worker needs to breed a pair of children."""

    previous: EvaluatedGeneration
    aggressiveness: float
    census: CensusStore
    weights: GaWeights
    graph: Graph
    requirements: RequirementVector
    rng: np.random.Generator

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass
class OperatorStats:
    """Invocation and improvement-credit counters, indexed by operator id."""

    invocations: np.ndarray = field(default_factory=lambda: np.zeros(N_OPERATORS + 1, dtype=np.int64))
    improvements: np.ndarray = field(default_factory=lambda: np.zeros(N_OPERATORS + 1, dtype=np.int64))

    def as_dicts(self) -> tuple[dict[str, int], dict[str, int]]:
        inv = {OPERATOR_LABELS[i]: int(self.invocations[i]) for i in range(1, N_OPERATORS + 1)}
        imp = {OPERATOR_LABELS[i]: int(self.improvements[i]) for i in range(1, N_OPERATORS + 1)}
        return inv, imp


def one_point_crossover(p1: Individual, p2: Individual, n: int, rng):
    """Swap suffixes after a cut drawn from positions [2, n-1] (needs n >= 3)."""
    s = int(rng.integers(2, n))
    c1 = np.concatenate([p1.bits[:s], p2.bits[s:]])
    c2 = np.concatenate([p2.bits[:s], p1.bits[s:]])
    return Individual(c1), Individual(c2)


def two_point_crossover(p1: Individual, p2: Individual, n: int, rng):
    """Swap the middle segment between two cuts (needs n >= 6)."""
    half = n // 2
    s1 = int(rng.integers(2, half))
    s2 = int(rng.integers(half + 1, n))
    c1 = np.concatenate([p1.bits[:s1], p2.bits[s1:s2], p1.bits[s2:]])
    c2 = np.concatenate([p2.bits[:s1], p1.bits[s1:s2], p2.bits[s2:]])
    return Individual(c1), Individual(c2)


def random_cut_crossover(p1: Individual, p2: Individual, aggressiveness: float,
                         n: int, rng):
    """Alternate parent segments around max(1, round(aggressiveness)) cuts."""
    cuts = min(max(1, round(aggressiveness)), n - 1)
    positions = np.sort(rng.choice(np.arange(1, n), size=cuts, replace=False))
    segment = np.searchsorted(positions, np.arange(n), side="right")
    take_second = segment % 2 == 1
    c1 = np.where(take_second, p2.bits, p1.bits).astype(np.uint8)
    c2 = np.where(take_second, p1.bits, p2.bits).astype(np.uint8)
    return Individual(c1), Individual(c2)


def uniform_crossover(p1: Individual, p2: Individual, swap_prob: float, n: int, rng):
    """Per position, both children take the opposite parent with swap_prob."""
    swap = rng.random(n) < swap_prob
    c1 = np.where(swap, p2.bits, p1.bits).astype(np.uint8)
    c2 = np.where(swap, p1.bits, p2.bits).astype(np.uint8)
    return Individual(c1), Individual(c2)


def logical_and(p1: Individual, p2: Individual):
    bits = (p1.bits & p2.bits).astype(np.uint8)
    return Individual(bits), Individual(bits.copy())


def logical_or(p1: Individual, p2: Individual):
    bits = (p1.bits | p2.bits).astype(np.uint8)
    return Individual(bits), Individual(bits.copy())


def logical_not(p1: Individual, p2: Individual):
    return Individual((1 - p1.bits).astype(np.uint8)), Individual((1 - p2.bits).astype(np.uint8))


def _sparse_logical(p1, p2, combined, aggressiveness, n, rng):
    patch = rng.random(n) < (aggressiveness / n)
    c1 = np.where(patch, combined, p1.bits).astype(np.uint8)
    c2 = np.where(patch, combined, p2.bits).astype(np.uint8)
    return Individual(c1), Individual(c2)


def sparse_and(p1: Individual, p2: Individual, aggressiveness: float, n: int, rng):
    """AND applied only at positions hit with probability aggressiveness/n."""
    return _sparse_logical(p1, p2, p1.bits & p2.bits, aggressiveness, n, rng)


def sparse_or(p1: Individual, p2: Individual, aggressiveness: float, n: int, rng):
    return _sparse_logical(p1, p2, p1.bits | p2.bits, aggressiveness, n, rng)


def average_vote(members):
    """Majority children: strict >50% inclusion for one, >60% for the other.

    Thresholds compare in exact integer arithmetic (1/2 and 3/5).
    """
    counts = np.zeros(len(members[0].bits), dtype=np.int64)
    for ind in members:
        counts += ind.bits
    total = len(members)
    c1 = (2 * counts > total).astype(np.uint8)
    c2 = (5 * counts > 3 * total).astype(np.uint8)
    return Individual(c1), Individual(c2)


def consensus_vote(p1: Individual, p2: Individual, census: CensusStore,
                   aggressiveness: float, n: int, rng):
    """At random positions, adopt the all-time majority verdict per vertex.

    A vertex's consensus is true iff it appeared in strictly more than half
    of all recorded individuals; with an empty census it is false everywhere.
    """
    patch = rng.random(n) < (aggressiveness / n)
    verdict = (2 * census.vertex_counts > census.total_recorded).astype(np.uint8)
    c1 = np.where(patch, verdict, p1.bits).astype(np.uint8)
    c2 = np.where(patch, verdict, p2.bits).astype(np.uint8)
    return Individual(c1), Individual(c2)


def _swap_pass(parent: Individual, g: Graph, r: RequirementVector,
               prob: float, rng) -> Individual:
    bits = parent.bits.copy()
    degrees = g.degrees
    for v in range(g.n):
        if not bits[v]:
            continue
        if rng.random() >= prob:
            continue
        bits[v] = 0
        missing = int(r.values[v])
        candidates = []
        for u in g.neighbors(v):
            if bits[u]:
                missing -= 1
            else:
                candidates.append(int(u))
        if missing > 0 and candidates:
            cand = np.asarray(candidates)
            order = np.lexsort((cand, -degrees[cand]))
            bits[cand[order[:missing]]] = 1
    return Individual(bits)


def neighbor_swap(p1: Individual, p2: Individual, g: Graph, r: RequirementVector,
                  aggressiveness: float, rng):
    """Trade set vertices for enough of their highest-degree neighbors.

    Each selected vertex leaves the set and r[v] minus already-selected
    neighbors of its free neighbors join, keeping v one-step dominated
    without paying for a propagation pass. Ties go to the lower vertex id.
    """
    prob = aggressiveness / g.n
    return _swap_pass(p1, g, r, prob, rng), _swap_pass(p2, g, r, prob, rng)


def rebuild_pair(p1: Individual, p2: Individual, target: int,
                 census: CensusStore, n: int, rng):
    """Two fresh candidates of a prescribed size (feasibility deferred).

    The first blends the parents position-wise and then inserts/removes
    random vertices to hit the target size; the second grows from empty by a
    roulette over vertex-census counts (uniform while the census is empty).
    """
    target = max(1, min(target, n))
    take_first = rng.integers(1, 3, size=n) == 1
    bits1 = np.where(take_first, p1.bits, p2.bits).astype(np.uint8)
    size = int(bits1.sum())
    if size > target:
        drop = rng.permutation(np.flatnonzero(bits1))[:size - target]
        bits1[drop] = 0
    elif size < target:
        add = rng.permutation(np.flatnonzero(bits1 == 0))[:target - size]
        bits1[add] = 1

    bits2 = np.zeros(n, dtype=np.uint8)
    for _ in range(target):
        unset = np.flatnonzero(bits2 == 0)
        pick = roulette_pick(census.vertex_counts[unset], rng)
        bits2[unset[pick]] = 1
    return Individual(bits1), Individual(bits2)


def mutate(ind: Individual, aggressiveness: float, n: int, rng) -> Individual:
    """Random inclusions then removals, biased toward shrinking the set.

    First pass may switch a clear bit on and, in the same step, any set bit
    off; a second removal-only pass skews the expected drift downward. Every
    gate fires with probability aggressiveness/n.
    """
    prob = aggressiveness / n
    r1 = rng.random(n)
    r2 = rng.random(n)
    current = ind.bits.astype(bool)
    current = current | (~current & (r1 < prob))
    current = current & ~(r2 < prob)
    r3 = rng.random(n)
    current = current & ~(r3 < prob)
    return Individual(current.astype(np.uint8))


def optimize_individual(ind: Individual, g: Graph, r: RequirementVector,
                        census: CensusStore, weights: GaWeights, rng) -> Individual:
    """Rebuild a candidate into a feasible, redundancy-pruned solution.

    Replays the input's vertices one at a time: members already dominated
    when their turn comes are dropped; once the input is exhausted, new
    vertices are drafted from the undominated pool. Selection weighs
    residual degree against vertex-census rarity. The output is always
    feasible and keeps only vertices that were undominated when chosen.
    """
    state = new_state(g, r)
    dominated = np.asarray(state.dominated)
    residual_degree = np.asarray(state.residual_degree)
    pending = ind.bits.copy()
    out = np.zeros(g.n, dtype=np.uint8)
    total = census.total_recorded
    w_deg = weights.degree_weight
    w_cen = weights.vertex_census_weight
    w_sum = w_deg + w_cen
    while state.undominated_count > 0:
        pending[dominated == 1] = 0
        pool = np.flatnonzero(pending)
        from_input = len(pool) > 0
        if not from_input:
            pool = state.undominated_vertices()
        degree_term = residual_degree[pool] / state.undominated_count
        if total > 0:
            census_term = (total - census.vertex_counts[pool]) / total
        else:
            census_term = np.ones(len(pool))
        pick_weights = (degree_term * w_deg + census_term * w_cen) / w_sum
        v = int(pool[roulette_pick(pick_weights, rng)])
        out[v] = 1
        if from_input:
            pending[v] = 0
        state.propagate(v)
    return Individual(out)


@dataclass(frozen=True)
class ReproductionOutput:
    children: tuple[Individual, Individual]
    elite: Individual
    operator_id: int


def _apply_operator(op: int, p1: Individual, p2: Individual,
                    ctx: ReproductionContext) -> tuple[Individual, Individual]:
    n, rng = ctx.n, ctx.rng
    # Tiny instances leave the cut intervals empty; substitute uniform crossover.
    if op == 1 and n < 3:
        op = 4
    elif op == 2 and n < 6:
        op = 4
    if op == 1:
        return one_point_crossover(p1, p2, n, rng)
    if op == 2:
        return two_point_crossover(p1, p2, n, rng)
    if op == 3:
        return random_cut_crossover(p1, p2, ctx.aggressiveness, n, rng)
    if op == 4:
        return uniform_crossover(p1, p2, ctx.weights.crossover_swap_prob, n, rng)
    if op == 5:
        return logical_and(p1, p2)
    if op == 6:
        return logical_or(p1, p2)
    if op == 7:
        return logical_not(p1, p2)
    if op == 8:
        return sparse_and(p1, p2, ctx.aggressiveness, n, rng)
    if op == 9:
        return sparse_or(p1, p2, ctx.aggressiveness, n, rng)
    if op == 10:
        return average_vote(ctx.previous.members)
    if op == 11:
        return consensus_vote(p1, p2, ctx.census, ctx.aggressiveness, n, rng)
    if op == 12:
        return neighbor_swap(p1, p2, ctx.graph, ctx.requirements, ctx.aggressiveness, rng)
    raise ValueError(f"operator {op} is not pairwise")


def reproduce(ctx: ReproductionContext, rank: int,
              forced_operator: int | None = None) -> ReproductionOutput:
    """One worker's contribution to the next generation.

    Draws an operator uniformly from the fourteen (unless forced, for
    tests), breeds two children, optionally mutates each, repairs both to
    feasibility, and copies the rank-th best member of the previous
    generation forward as the elite.
    """
    rng = ctx.rng
    prev = ctx.previous
    op = forced_operator if forced_operator is not None else int(rng.integers(1, N_OPERATORS + 1))
    ranked = prev.ranked_indices()

    if op <= 13:
        i1 = roulette_pick(prev.fitness, rng)
        i2 = roulette_pick(prev.fitness, rng)
        p1, p2 = prev.members[i1], prev.members[i2]
        if op <= 12:
            c1, c2 = _apply_operator(op, p1, p2, ctx)
        else:
            best = prev.members[prev.best_index]
            step = round(ctx.aggressiveness)
            target = best.size - step if best.size > step else best.size
            c1, c2 = rebuild_pair(p1, p2, target, ctx.census, ctx.n, rng)
    else:
        b1 = prev.members[ranked[0]]
        b2 = prev.members[ranked[min(1, len(ranked) - 1)]]
        c1 = mutate(b1, ctx.aggressiveness, ctx.n, rng)
        c2 = mutate(b2, ctx.aggressiveness, ctx.n, rng)

    gate1 = rng.random()
    gate2 = rng.random()
    if gate1 < ctx.weights.mutation_prob:
        c1 = mutate(c1, ctx.aggressiveness, ctx.n, rng)
    if gate2 < ctx.weights.mutation_prob:
        c2 = mutate(c2, ctx.aggressiveness, ctx.n, rng)

    c1 = optimize_individual(c1, ctx.graph, ctx.requirements, ctx.census, ctx.weights, rng)
    c2 = optimize_individual(c2, ctx.graph, ctx.requirements, ctx.census, ctx.weights, rng)

    elite = prev.members[ranked[rank - 1]].copy()
    return ReproductionOutput(children=(c1, c2), elite=elite, operator_id=op)
