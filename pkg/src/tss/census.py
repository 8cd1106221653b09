"""Population bookkeeping: per-solution and per-vertex occurrence counts.

Both counters drive diversity: recurring solutions lose fitness, and
rarely used vertices get a selection boost during repair. Keys are the
packed bit vectors themselves, so two individuals share a key iff their
bit vectors are identical (no collisions, at a known memory cost).
"""
from __future__ import annotations

import numpy as np

from .individual import Individual


class CensusStore:
    """Occurrence counters over every individual recorded so far.

    Updates happen only at generation barriers (single-threaded); lookups
    against the frozen store are safe from concurrent workers.
    """

    def __init__(self, n: int):
        self.n = n
        self._solution_counts: dict[bytes, int] = {}
        self.vertex_counts = np.zeros(n, dtype=np.int64)
        self.total_recorded = 0

    def record_generation(self, members) -> None:
        """Count every member of a consolidated generation, elites included."""
        counts = self._solution_counts
        for ind in members:
            key = ind.key()
            counts[key] = counts.get(key, 0) + 1
            self.vertex_counts += ind.bits
        self.total_recorded += len(members)

    def solution_count(self, ind: Individual) -> int:
        """How many times this exact bit vector has been recorded (0 if never)."""
        return self._solution_counts.get(ind.key(), 0)

    def vertex_count(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range [0, {self.n})")
        return int(self.vertex_counts[v])

    @property
    def distinct_count(self) -> int:
        return len(self._solution_counts)

    def dump_csv(self, stream) -> None:
        """Diagnostic dump: per-vertex counts plus a summary line."""
        stream.write("vertex,v_census\n")
        for v in range(self.n):
            stream.write(f"{v},{int(self.vertex_counts[v])}\n")
        stream.write(f"total,{self.total_recorded},distinct,{self.distinct_count}\n")
