"""Fitness pipeline: raw score from size and rarity, then sigma scaling."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .census import CensusStore
from .individual import Individual

FITNESS_FLOOR = 0.01


@dataclass(frozen=True)
class GaWeights:
    """Scoring weights and per-operator probabilities.

    size/solution-census weights shape the raw fitness; degree/vertex-census
    weights shape the repair roulette; the two probabilities drive uniform
    crossover and the mutation gate.
    """

    size_weight: float = 0.98
    solution_census_weight: float = 0.02
    degree_weight: float = 0.98
    vertex_census_weight: float = 0.02
    crossover_swap_prob: float = 0.3
    mutation_prob: float = 0.025

    def __post_init__(self):
        for name in ("size_weight", "solution_census_weight",
                     "degree_weight", "vertex_census_weight"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.size_weight + self.solution_census_weight <= 0:
            raise ValueError("size_weight + solution_census_weight must be positive")
        if self.degree_weight + self.vertex_census_weight <= 0:
            raise ValueError("degree_weight + vertex_census_weight must be positive")
        for name in ("crossover_swap_prob", "mutation_prob"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


def raw_fitness(ind: Individual, store: CensusStore, n: int, weights: GaWeights) -> float:
    """Pre-scaling score: smaller and rarer solutions score higher.

    ((n - size) * wSize + (W - count(S)) * wSCensus) / (wSize + wSCensus),
    where W is the total number of individuals recorded so far.
    """
    size_term = (n - ind.size) * weights.size_weight
    rarity_term = (store.total_recorded - store.solution_count(ind)) * weights.solution_census_weight
    return (size_term + rarity_term) / (weights.size_weight + weights.solution_census_weight)


def sigma_scale(raw: np.ndarray) -> np.ndarray:
    """Scale scores around the generation mean with a 0.01 floor.

    All-equal scores map to 1 everywhere (everyone keeps a fair selection
    chance); otherwise f = max(1 + (pf - mean) / (2 * stddev), 0.01) with the
    population (divide-by-N) standard deviation.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if len(raw) == 0:
        raise ValueError("empty generation")
    mean = raw.mean()
    std = raw.std()
    if std == 0.0:
        return np.ones_like(raw)
    return np.maximum(1.0 + (raw - mean) / (2.0 * std), FITNESS_FLOOR)


@dataclass(frozen=True, eq=False)
class EvaluatedGeneration:
    """A consolidated generation with raw scores and scaled fitness."""

    members: list = field(repr=False)
    raw: np.ndarray
    fitness: np.ndarray
    best_index: int
    raw_mean: float
    raw_std: float

    def __len__(self) -> int:
        return len(self.members)

    def ranked_indices(self) -> np.ndarray:
        """Member indices by descending fitness, ties broken by lower index."""
        return np.argsort(-self.fitness, kind="stable")

    def min_size(self) -> int:
        return min(ind.size for ind in self.members)


def evaluate_generation(members, store: CensusStore, n: int,
                        weights: GaWeights) -> EvaluatedGeneration:
    """Score each member, then consolidate mean/stddev and scale once.

    The per-member scoring is an independent map (run in parallel by the
    engine's workers at scale); the statistics form the synchronization point.
    """
    raw = np.array([raw_fitness(ind, store, n, weights) for ind in members],
                   dtype=np.float64)
    fitness = sigma_scale(raw)
    best_index = int(np.argmax(fitness))
    return EvaluatedGeneration(
        members=list(members),
        raw=raw,
        fitness=fitness,
        best_index=best_index,
        raw_mean=float(raw.mean()),
        raw_std=float(raw.std()),
    )
