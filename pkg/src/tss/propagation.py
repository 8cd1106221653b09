"""Activation-closure semantics shared by every solver, with kernel selection.

The breadth-first domination walk dominates total runtime, so it exists
twice: a compiled Cython kernel and a pure-Python twin. The compiled one is
preferred at import; set ``TSS_PURE_PYTHON=1`` to force the fallback.
``benchmarks/bench_kernels.py`` compares the two.
"""
from __future__ import annotations

import os

import numpy as np

from . import _propagation_py

_BACKENDS = {"python": _propagation_py}
try:
    from . import _propagation_cy
    _BACKENDS["compiled"] = _propagation_cy
except ImportError:
    _propagation_cy = None

if os.environ.get("TSS_PURE_PYTHON", "").strip() not in ("", "0"):
    _active = _propagation_py
else:
    _active = _BACKENDS.get("compiled", _propagation_py)


def active_backend() -> str:
    """Name of the kernel in use: 'compiled' or 'python'."""
    return _active.BACKEND_NAME


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def set_backend(name: str) -> None:
    """Switch kernels at runtime (benchmarks and parity tests)."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; have {available_backends()}")
    _active = _BACKENDS[name]


def new_state(g, r):
    """Fresh propagation state (nothing dominated) for an instance."""
    return _active.PropagationState(g.indptr, g.indices, r.values)


def closure_state(g, r, bits):
    """Propagate every set bit of a candidate vector; returns the state."""
    state = new_state(g, r)
    for v in np.flatnonzero(bits):
        state.propagate(int(v))
    return state


def activation_closure(g, r, individual) -> np.ndarray:
    """Least fixed point of the domination rule: the dominated vertex ids."""
    state = closure_state(g, r, individual.bits)
    return np.flatnonzero(np.asarray(state.dominated)).astype(np.int64)


def is_feasible(g, r, individual) -> bool:
    """True iff the candidate's activation closure covers every vertex."""
    return closure_state(g, r, individual.bits).undominated_count == 0
