"""The generational loop: self-adaptive aggressiveness, elitism, stopping.

Each generation, every worker breeds two repaired children and carries one
elite forward, the pool synchronizes, fitness statistics are consolidated,
and the census absorbs the new members. The aggressiveness parameter resets
on improvement and grows linearly while the best size stagnates.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .census import CensusStore
from .fitness import EvaluatedGeneration, GaWeights, evaluate_generation
from .graph import Graph, RequirementVector
from .individual import Individual
from .sampling import worker_rng
from .seeding import build_initial_generation
from .variation import OperatorStats, ReproductionContext, reproduce


@dataclass(frozen=True)
class GaParams:
    """Run parameters; defaults follow the tuned reference configuration."""

    master_seed: int
    g_min: int = 10
    g_max: int = 500
    g_w_improvement: int = 50
    weights: GaWeights = field(default_factory=GaWeights)
    workers: int | None = None   # None: use the machine's parallelism
    time_limit: float | None = None  # seconds, checked at generation boundaries

    def __post_init__(self):
        if not 1 <= self.g_min <= self.g_max:
            raise ValueError("need 1 <= g_min <= g_max")
        if self.g_w_improvement < 1:
            raise ValueError("g_w_improvement must be >= 1")
        if self.workers is not None and self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")


def initial_aggressiveness(g: Graph, r: RequirementVector) -> float:
    """Starting change budget derived from the threshold profile.

    min(max_threshold^2 * n / sum(thresholds), n / 4); with a uniform
    threshold k this simplifies to min(k, n / 4).
    """
    values = r.values.astype(np.float64)
    peak = float(values.max())
    return float(min(peak * peak * g.n / values.sum(), g.n / 4.0))


@dataclass
class GenerationLog:
    """Snapshot handed to the progress callback after each barrier."""

    index: int
    best_size: int
    generation_min_size: int
    aggressiveness: float
    stagnation: int
    elapsed_s: float
    members: list[Individual] = field(repr=False, default_factory=list)

    def as_line(self) -> str:
        return (f"gen={self.index} best={self.best_size} "
                f"gen_min={self.generation_min_size} "
                f"aggressiveness={self.aggressiveness:.4f} "
                f"stagnation={self.stagnation} elapsed_s={self.elapsed_s:.3f}")


@dataclass
class GaState:
    """Mutable loop state between generation barriers."""

    graph: Graph
    requirements: RequirementVector
    params: GaParams
    workers: int
    generation_index: int
    stagnation: int
    aggressiveness: float
    delta0: float
    delta_step: float
    best: Individual
    best_size: int
    census: CensusStore
    evaluated: EvaluatedGeneration
    opstats: OperatorStats
    improvements: int = 0
    max_aggressiveness: float = 0.0


@dataclass
class RunResult:
    """Outcome of one GA run; the solution is reported in external ids."""

    best_individual: Individual
    best_vertices: np.ndarray
    best_size: int
    generations: int            # reproduction generations (initial one excluded)
    wall_time_s: float
    stop_reason: str            # converged | g_max | time_limit
    initial_aggressiveness: float
    aggressiveness_step: float
    final_aggressiveness: float
    improvements: int
    operator_invocations: dict[str, int]
    operator_improvements: dict[str, int]
    workers: int
    population_size: int
    census: CensusStore = field(repr=False, default=None)


def resolve_workers(requested: int | None) -> int:
    if requested is not None:
        return requested
    import os
    return max(os.cpu_count() or 1, 1)


def _best_member(members) -> tuple[int, Individual]:
    best = min(range(len(members)), key=lambda i: (members[i].size, i))
    return members[best].size, members[best]


def init_state(g: Graph, r: RequirementVector, params: GaParams,
               executor=None) -> GaState:
    """Construct and evaluate the starting generation."""
    RequirementVector.checked(g, r.values)  # surface contract violations early
    workers = resolve_workers(params.workers)
    delta0 = initial_aggressiveness(g, r)
    delta_step = 3.0 * delta0 / params.g_w_improvement
    census = CensusStore(g.n)
    members = build_initial_generation(g, r, workers, params.master_seed, executor)
    evaluated = evaluate_generation(members, census, g.n, params.weights)
    census.record_generation(members)
    best_size, best = _best_member(members)
    return GaState(
        graph=g, requirements=r, params=params, workers=workers,
        generation_index=0, stagnation=0, aggressiveness=delta0,
        delta0=delta0, delta_step=delta_step,
        best=best.copy(), best_size=best_size,
        census=census, evaluated=evaluated, opstats=OperatorStats(),
        max_aggressiveness=delta0,
    )


def step_generation(state: GaState, executor=None) -> None:
    """Breed, consolidate, evaluate, and record one new generation.

    Workers run against frozen snapshots of the previous generation and the
    census; all shared updates happen here, between the barriers. The result
    depends only on (seed, worker count), never on scheduling.
    """
    i = state.generation_index + 1
    prev = state.evaluated
    params = state.params

    def work(rank: int):
        ctx = ReproductionContext(
            previous=prev,
            aggressiveness=state.aggressiveness,
            census=state.census,
            weights=params.weights,
            graph=state.graph,
            requirements=state.requirements,
            rng=worker_rng(params.master_seed, i, rank),
        )
        return reproduce(ctx, rank)

    ranks = range(1, state.workers + 1)
    if executor is None:
        outputs = [work(rank) for rank in ranks]
    else:
        outputs = list(executor.map(work, ranks))

    members: list[Individual] = []
    child_ops: list[tuple[int, int]] = []  # (member index, operator id)
    for out in outputs:
        for child in out.children:
            child_ops.append((len(members), out.operator_id))
            members.append(child)
        members.append(out.elite)
        state.opstats.invocations[out.operator_id] += 1

    evaluated = evaluate_generation(members, state.census, state.graph.n, params.weights)
    state.census.record_generation(members)

    previous_best = state.best_size
    for idx, op in child_ops:
        if members[idx].size < previous_best:
            state.opstats.improvements[op] += 1

    gen_min_size, gen_min = _best_member(members)
    if gen_min_size < state.best_size:
        state.best_size = gen_min_size
        state.best = gen_min.copy()
        state.stagnation = 0
        state.aggressiveness = state.delta0
        state.improvements += 1
    else:
        state.stagnation += 1
        state.aggressiveness = state.delta0 + state.stagnation * state.delta_step
    state.max_aggressiveness = max(state.max_aggressiveness, state.aggressiveness)
    state.generation_index = i
    state.evaluated = evaluated


def _should_continue(state: GaState) -> bool:
    """Continue into generation i+1?

    At least g_min reproduction generations run; stagnation may extend the
    run while it stays within g_w_improvement; g_max caps it. The initial
    generation is excluded from the count, so g_min = g_max = 1 yields
    exactly the initial generation plus one reproduction generation.
    """
    i = state.generation_index
    params = state.params
    return (i < params.g_min or state.stagnation <= params.g_w_improvement) \
        and i < params.g_max


def run(g: Graph, r: RequirementVector, params: GaParams,
        on_generation: Callable[[GenerationLog], None] | None = None) -> RunResult:
    """Full GA run; deterministic given (instance, params)."""
    start = time.perf_counter()

    def emit(state: GaState):
        if on_generation is not None:
            on_generation(GenerationLog(
                index=state.generation_index,
                best_size=state.best_size,
                generation_min_size=state.evaluated.min_size(),
                aggressiveness=state.aggressiveness,
                stagnation=state.stagnation,
                elapsed_s=time.perf_counter() - start,
                members=state.evaluated.members,
            ))

    workers = resolve_workers(params.workers)
    stop_reason = "converged"
    with ThreadPoolExecutor(max_workers=workers) as executor:
        pool = executor if workers > 1 else None
        state = init_state(g, r, params, pool)
        emit(state)
        while True:
            if not _should_continue(state):
                stop_reason = "g_max" if state.generation_index >= params.g_max else "converged"
                break
            if params.time_limit is not None and \
                    time.perf_counter() - start >= params.time_limit:
                stop_reason = "time_limit"
                break
            step_generation(state, pool)
            emit(state)

    inv, imp = state.opstats.as_dicts()
    return RunResult(
        best_individual=state.best,
        best_vertices=g.external_ids[state.best.vertices()],
        best_size=state.best_size,
        generations=state.generation_index,
        wall_time_s=time.perf_counter() - start,
        stop_reason=stop_reason,
        initial_aggressiveness=state.delta0,
        aggressiveness_step=state.delta_step,
        final_aggressiveness=state.aggressiveness,
        improvements=state.improvements,
        operator_invocations=inv,
        operator_improvements=imp,
        workers=state.workers,
        population_size=3 * state.workers,
        census=state.census,
    )
