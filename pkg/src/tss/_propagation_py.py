"""Pure-Python domination kernel; behavioral twin of the compiled one.

Kept dependency-light on purpose: the GA, the exact solvers, and the tests
must produce bit-identical results whichever kernel is active.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


class PropagationState:
    """Mutable scratch state for breadth-first domination propagation.

    Tracks, per vertex: the dominated flag, the residual requirement (the
    threshold minus dominated neighbors, floored at 0), and the residual
    degree (neighbors not yet dominated). The CSR adjacency and the
    threshold vector are shared and never mutated.
    """

    def __init__(self, indptr, indices, requirement):
        self._indptr = np.ascontiguousarray(indptr, dtype=np.int32)
        self._indices = np.ascontiguousarray(indices, dtype=np.int32)
        self._requirement = np.ascontiguousarray(requirement, dtype=np.int32)
        self.n = len(self._requirement)
        self._base_degree = np.diff(self._indptr).astype(np.int32)
        self.residual_requirement = self._requirement.copy()
        self.residual_degree = self._base_degree.copy()
        self.dominated = np.zeros(self.n, dtype=np.uint8)
        self.undominated_count = self.n

    def reset(self) -> None:
        np.copyto(self.residual_requirement, self._requirement)
        np.copyto(self.residual_degree, self._base_degree)
        self.dominated[:] = 0
        self.undominated_count = self.n

    def propagate(self, x: int) -> int:
        """Assert x as dominated and cascade; returns newly dominated count.

        No-op (returns 0) when x is already dominated.
        """
        dom = self.dominated
        res_req = self.residual_requirement
        res_deg = self.residual_degree
        indptr = self._indptr
        indices = self._indices
        if dom[x]:
            return 0
        dom[x] = 1
        queue = [x]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            for u in indices[indptr[v]:indptr[v + 1]]:
                if dom[u]:
                    continue
                res_deg[u] -= 1
                if res_req[u] > 0:
                    res_req[u] -= 1
                if res_req[u] <= 0:
                    dom[u] = 1
                    queue.append(int(u))
            res_deg[v] = 0
        self.undominated_count -= len(queue)
        return len(queue)

    def copy(self) -> PropagationState:
        other = PropagationState.__new__(PropagationState)
        other._indptr = self._indptr
        other._indices = self._indices
        other._requirement = self._requirement
        other._base_degree = self._base_degree
        other.n = self.n
        other.residual_requirement = self.residual_requirement.copy()
        other.residual_degree = self.residual_degree.copy()
        other.dominated = self.dominated.copy()
        other.undominated_count = self.undominated_count
        return other

    def undominated_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.dominated == 0).astype(np.int32)

    @property
    def complete(self) -> bool:
        return self.undominated_count == 0
