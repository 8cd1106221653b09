"""Weighted selection and reproducible per-worker random streams."""
from __future__ import annotations

import numpy as np


def roulette_pick(weights: np.ndarray, rng: np.random.Generator) -> int:
    """Index drawn with probability proportional to its weight.

    A nonpositive total degenerates to a uniform choice, so callers never
    have to special-case all-zero weight vectors.
    """
    weights = np.asarray(weights, dtype=np.float64)
    total = float(weights.sum())
    if not total > 0.0:
        return int(rng.integers(len(weights)))
    u = rng.random() * total
    idx = int(np.searchsorted(np.cumsum(weights), u, side="right"))
    return min(idx, len(weights) - 1)


def worker_rng(master_seed: int, generation: int, rank: int) -> np.random.Generator:
    """Stream derived from (seed, generation, worker rank).

    Independent of scheduling order, so parallel runs replay exactly.
    """
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(generation, rank))
    return np.random.default_rng(ss)
