#!/usr/bin/env python3
"""Compare the compiled propagation kernel against the pure-Python fallback.

Times full activation closures and greedy constructions on random
instances of growing size, one row per (n, backend).

Usage: python3 benchmarks/bench_kernels.py [--sizes 300 1000 3000] [--repeat 5]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from tss.graph import generate_random_graph, random_requirements
from tss.individual import Individual
from tss.propagation import (activation_closure, available_backends, new_state,
                             set_backend)
from tss.seeding import construct_s2_greedy


def bench_instance(n: int, repeat: int, backend: str) -> dict:
    set_backend(backend)
    # average degree ~10 keeps cascade lengths comparable across sizes
    q = min(10.0 / n, 1.0)
    g = generate_random_graph(n, q, seed=n)
    r = random_requirements(g, seed=n + 1)
    rng = np.random.default_rng(0)
    seeds = [Individual.from_vertices(n, rng.choice(n, size=max(n // 20, 1), replace=False))
             for _ in range(repeat)]

    t0 = time.perf_counter()
    for ind in seeds:
        activation_closure(g, r, ind)
    closure_s = (time.perf_counter() - t0) / repeat

    t0 = time.perf_counter()
    for k in range(repeat):
        construct_s2_greedy(g, r, new_state(g, r), np.random.default_rng(k))
    greedy_s = (time.perf_counter() - t0) / repeat

    return {"n": n, "m": g.m, "backend": backend,
            "closure_ms": closure_s * 1000.0, "greedy_ms": greedy_s * 1000.0}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[300, 1000, 3000])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = available_backends()
    print(f"{'n':>6} {'m':>7} {'backend':>9} {'closure_ms':>11} {'greedy_ms':>10}")
    rows: dict[tuple[int, str], dict] = {}
    for n in args.sizes:
        for backend in backends:
            row = bench_instance(n, args.repeat, backend)
            rows[(n, backend)] = row
            print(f"{row['n']:>6} {row['m']:>7} {row['backend']:>9} "
                  f"{row['closure_ms']:>11.3f} {row['greedy_ms']:>10.3f}")

    if "compiled" in backends and "python" in backends:
        print("\nspeedup (python / compiled):")
        for n in args.sizes:
            py, cy = rows[(n, "python")], rows[(n, "compiled")]
            print(f"  n={n}: closure x{py['closure_ms'] / cy['closure_ms']:.1f}, "
                  f"greedy x{py['greedy_ms'] / cy['greedy_ms']:.1f}")
    set_backend("compiled" if "compiled" in backends else "python")


if __name__ == "__main__":
    main()
