"""Candidate solutions as bit vectors with a cached popcount."""
from __future__ import annotations

import numpy as np


class Individual:
    """A candidate target set: bits[v] = 1 iff vertex v is selected."""

    __slots__ = ("bits", "size")

    def __init__(self, bits: np.ndarray, size: int | None = None):
        bits = np.ascontiguousarray(bits, dtype=np.uint8)
        self.bits = bits
        self.size = int(bits.sum()) if size is None else int(size)

    @classmethod
    def empty(cls, n: int) -> Individual:
        return cls(np.zeros(n, dtype=np.uint8), 0)

    @classmethod
    def from_vertices(cls, n: int, vertices) -> Individual:
        bits = np.zeros(n, dtype=np.uint8)
        bits[np.asarray(vertices, dtype=np.int64)] = 1
        return cls(bits)

    def vertices(self) -> np.ndarray:
        return np.flatnonzero(self.bits).astype(np.int64)

    def key(self) -> bytes:
        """Collision-free identity: the packed bit vector itself."""
        return np.packbits(self.bits).tobytes()

    def copy(self) -> Individual:
        return Individual(self.bits.copy(), self.size)

    def __len__(self) -> int:
        return len(self.bits)

    def __eq__(self, other) -> bool:
        return isinstance(other, Individual) and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Individual(size={self.size}, n={len(self.bits)})"
