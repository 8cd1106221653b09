# cython: language_level=3
# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled domination kernel; behavioral twin of _propagation_py.

The queue walk is the hot loop of every feasibility check, greedy
construction, and repair pass, so it runs entirely on C integer arrays.
"""

import numpy as np

BACKEND_NAME = "compiled"


cdef class PropagationState:
    """Mutable scratch state for breadth-first domination propagation.

    Same contract as the pure-Python twin: per-vertex dominated flags,
    residual requirements (floored at 0) and residual degrees over a shared,
    immutable CSR adjacency.
    """

    cdef readonly int n
    cdef readonly long long undominated_count
    cdef int[::1] _indptr_mv
    cdef int[::1] _indices_mv
    cdef int[::1] _requirement_mv
    cdef int[::1] _res_req_mv
    cdef int[::1] _res_deg_mv
    cdef unsigned char[::1] _dom_mv
    cdef int[::1] _queue_mv
    # numpy handles keep buffers alive and give zero-copy python views
    cdef object _np_indptr, _np_indices, _np_requirement, _np_base_degree
    cdef object _np_res_req, _np_res_deg, _np_dom, _np_queue

    def __init__(self, indptr, indices, requirement):
        self._np_indptr = np.ascontiguousarray(indptr, dtype=np.int32)
        self._np_indices = np.ascontiguousarray(indices, dtype=np.int32)
        self._np_requirement = np.ascontiguousarray(requirement, dtype=np.int32)
        self.n = len(self._np_requirement)
        self._np_base_degree = np.diff(self._np_indptr).astype(np.int32)
        self._np_res_req = self._np_requirement.copy()
        self._np_res_deg = self._np_base_degree.copy()
        self._np_dom = np.zeros(self.n, dtype=np.uint8)
        self._np_queue = np.zeros(self.n, dtype=np.int32)
        self._bind_views()
        self.undominated_count = self.n

    cdef void _bind_views(self):
        self._indptr_mv = self._np_indptr
        self._indices_mv = self._np_indices
        self._requirement_mv = self._np_requirement
        self._res_req_mv = self._np_res_req
        self._res_deg_mv = self._np_res_deg
        self._dom_mv = self._np_dom
        self._queue_mv = self._np_queue

    def reset(self):
        np.copyto(self._np_res_req, self._np_requirement)
        np.copyto(self._np_res_deg, self._np_base_degree)
        self._np_dom[:] = 0
        self.undominated_count = self.n

    cpdef long long propagate(self, int x):
        """Assert x as dominated and cascade; returns newly dominated count."""
        cdef int head = 0, tail = 0
        cdef int v, u, k, row_start, row_end
        if self._dom_mv[x]:
            return 0
        self._dom_mv[x] = 1
        self._queue_mv[tail] = x
        tail += 1
        while head < tail:
            v = self._queue_mv[head]
            head += 1
            row_start = self._indptr_mv[v]
            row_end = self._indptr_mv[v + 1]
            for k in range(row_start, row_end):
                u = self._indices_mv[k]
                if self._dom_mv[u]:
                    continue
                self._res_deg_mv[u] -= 1
                if self._res_req_mv[u] > 0:
                    self._res_req_mv[u] -= 1
                if self._res_req_mv[u] <= 0:
                    self._dom_mv[u] = 1
                    self._queue_mv[tail] = u
                    tail += 1
            self._res_deg_mv[v] = 0
        self.undominated_count -= tail
        return tail

    cpdef PropagationState copy(self):
        cdef PropagationState other = PropagationState.__new__(PropagationState)
        other._np_indptr = self._np_indptr
        other._np_indices = self._np_indices
        other._np_requirement = self._np_requirement
        other._np_base_degree = self._np_base_degree
        other.n = self.n
        other._np_res_req = self._np_res_req.copy()
        other._np_res_deg = self._np_res_deg.copy()
        other._np_dom = self._np_dom.copy()
        other._np_queue = np.zeros(self.n, dtype=np.int32)
        other._bind_views()
        other.undominated_count = self.undominated_count
        return other

    def undominated_vertices(self):
        return np.flatnonzero(self._np_dom == 0).astype(np.int32)

    @property
    def residual_requirement(self):
        return self._np_res_req

    @property
    def residual_degree(self):
        return self._np_res_deg

    @property
    def dominated(self):
        return self._np_dom

    @property
    def complete(self):
        return self.undominated_count == 0
