"""Command-line front end: gen, preprocess, solve, bench, verify.

All randomness flows from explicit seeds; ``solve`` draws and prints one
when none is given. Solve reports are single JSON documents with sorted
keys, bench output is CSV, and progress/preprocess reports are
line-oriented key=value text.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import secrets
import sys
import time
from pathlib import Path

import numpy as np

from . import engine, exact, instance_io
from .fitness import GaWeights
from .graph import (EmptyInstanceError, GenerationFailureError, Graph,
                    NormalizedInstance, RequirementVector, capped_requirements,
                    generate_random_graph, normalize_instance, preprocess,
                    random_requirements)
from .individual import Individual
from .propagation import active_backend, is_feasible

REPORT_FORMAT = "tss-solve-report/1"


class CliError(Exception):
    """User-facing failure with a clean message and exit code 1."""


def _parse_requirement_source(text: str) -> tuple[str, str]:
    for tag in ("file", "random", "cap"):
        prefix = tag + ":"
        if text.startswith(prefix):
            return tag, text[len(prefix):]
    raise CliError(
        f"bad requirement source {text!r}; expected file:PATH, random:SEED, or cap:K")


def _load_instance(graph_path: str, requirement_spec: str | None):
    """Resolve (graph, raw threshold values) from CLI arguments."""
    path = Path(graph_path)
    if not path.exists():
        raise CliError(f"graph file not found: {path}")
    embedded = None
    if instance_io.is_binary_instance(path):
        g, embedded = instance_io.read_binary_instance(path)
        report = None
    else:
        try:
            raw = instance_io.read_edge_list(path)
            g, report = preprocess(raw)
        except (instance_io.EdgeListParseError, EmptyInstanceError) as exc:
            raise CliError(f"{path}: {exc}") from exc

    if requirement_spec is None:
        if embedded is None:
            raise CliError("no requirement source: pass --requirements "
                           "file:PATH, random:SEED, or cap:K")
        return g, embedded, report, "embedded"

    tag, arg = _parse_requirement_source(requirement_spec)
    if tag == "file":
        values = instance_io.read_requirement_file(arg, g)
    elif tag == "random":
        values = random_requirements(g, int(arg)).values
    else:
        values = capped_requirements(g, int(arg)).values
    return g, values, report, requirement_spec


def _normalize(g: Graph, values) -> NormalizedInstance:
    try:
        return normalize_instance(g, values)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _ga_params_from_args(args, seed: int) -> engine.GaParams:
    weights = GaWeights(
        size_weight=args.w_size,
        solution_census_weight=args.w_scensus,
        degree_weight=args.w_degree,
        vertex_census_weight=args.w_vcensus,
        crossover_swap_prob=args.p_prob_cross,
        mutation_prob=args.p_mutation,
    )
    return engine.GaParams(
        master_seed=seed,
        g_min=args.g_min,
        g_max=args.g_max,
        g_w_improvement=args.g_w_improvement,
        weights=weights,
        workers=args.workers,
        time_limit=args.time_limit,
    )


def _resolve_workers_arg(value: str | None) -> int | None:
    if value is not None:
        return int(value)
    env = os.environ.get("TSS_WORKERS")
    return int(env) if env else None


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------- commands


def cmd_gen(args) -> int:
    if not 0.0 <= args.q <= 1.0:
        raise CliError(f"q={args.q} outside [0, 1]")
    try:
        g = generate_random_graph(args.n, args.q, args.seed)
    except (ValueError, GenerationFailureError) as exc:
        raise CliError(str(exc)) from exc
    r = random_requirements(g, args.seed + 1)
    edge_path = f"{args.out}.edges"
    req_path = f"{args.out}.req"
    instance_io.write_edge_list(edge_path, g)
    instance_io.write_requirement_file(req_path, g, r.values)
    print(f"edges={edge_path} requirements={req_path} n={g.n} m={g.m} "
          f"q={args.q} seed={args.seed}")
    return 0


def cmd_preprocess(args) -> int:
    try:
        raw = instance_io.read_edge_list(args.input)
        g, report = preprocess(raw)
    except FileNotFoundError as exc:
        raise CliError(str(exc)) from exc
    except (instance_io.EdgeListParseError, EmptyInstanceError) as exc:
        raise CliError(f"{args.input}: {exc}") from exc
    values = None
    if args.requirements is not None:
        tag, arg = _parse_requirement_source(args.requirements)
        if tag == "file":
            values = instance_io.read_requirement_file(arg, g)
        elif tag == "random":
            values = random_requirements(g, int(arg)).values
        else:
            values = capped_requirements(g, int(arg)).values
    instance_io.write_binary_instance(args.out, g, values)
    lines = [f"{key}={value}" for key, value in report.as_dict().items()]
    lines.append(f"out={args.out}")
    lines.append(f"requirements_embedded={values is not None}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    return 0


def _run_ga(norm: NormalizedInstance, params: engine.GaParams, quiet: bool,
            census_dump: str | None):
    def on_generation(log):
        if not quiet:
            print(log.as_line(), file=sys.stderr)

    result = engine.run(norm.graph, norm.requirements, params, on_generation)
    if census_dump:
        with open(census_dump, "w", encoding="utf-8") as fh:
            result.census.dump_csv(fh)
    return result


def cmd_solve(args) -> int:
    g, values, _, req_desc = _load_instance(args.graph, args.requirements)
    norm = _normalize(g, values)
    seed = args.seed if args.seed is not None else secrets.randbelow(2**31)
    if args.seed is None:
        print(f"seed={seed}", file=sys.stderr)
    workers = _resolve_workers_arg(args.workers)
    args.workers = workers

    report: dict = {
        "format": REPORT_FORMAT,
        "backend": active_backend(),
        "instance": {
            "graph": str(args.graph),
            "requirements": req_desc,
            "n": g.n,
            "m": g.m,
            "reduced_n": 0 if norm.graph is None else norm.graph.n,
            "pre_dominated": int(len(norm.pre_dominated)),
        },
        "mode": args.mode,
        "seed": seed,
    }

    if norm.graph is None:
        # Free activations already dominate everything: the empty set solves it.
        empty = {"best_size": 0, "solution": []}
        if args.mode in ("ga", "both"):
            report["ga"] = empty
        if args.mode in ("exact", "both"):
            report["exact"] = empty
        if args.mode == "both":
            report["gap"] = 0
        _emit_report(args, report)
        return 0

    if args.mode in ("ga", "both"):
        params = _ga_params_from_args(args, seed)
        result = _run_ga(norm, params, args.quiet, args.census_dump)
        report["params"] = {
            "g_min": params.g_min, "g_max": params.g_max,
            "g_w_improvement": params.g_w_improvement,
            "w_size": params.weights.size_weight,
            "w_scensus": params.weights.solution_census_weight,
            "w_degree": params.weights.degree_weight,
            "w_vcensus": params.weights.vertex_census_weight,
            "p_prob_cross": params.weights.crossover_swap_prob,
            "p_mutation": params.weights.mutation_prob,
            "workers": result.workers,
            "time_limit": params.time_limit,
        }
        report["ga"] = {
            "best_size": result.best_size,
            "solution": [int(v) for v in sorted(result.best_vertices)],
            "generations": result.generations,
            "stop_reason": result.stop_reason,
            "population_size": result.population_size,
            "aggressiveness": {
                "initial": result.initial_aggressiveness,
                "step": result.aggressiveness_step,
                "final": result.final_aggressiveness,
                "resets": result.improvements,
            },
            "operators": {
                "invocations": result.operator_invocations,
                "improvements": result.operator_improvements,
            },
            "wall_ms": round(result.wall_time_s * 1000.0, 3),
        }

    if args.mode in ("exact", "both"):
        t0 = time.perf_counter()
        try:
            exact_result = exact.exact_backtracking(
                norm.graph, norm.requirements, workers=workers or 1,
                max_n=args.exact_max_n)
        except exact.InstanceTooLargeError as exc:
            raise CliError(str(exc)) from exc
        report["exact"] = {
            "size": exact_result.size,
            "solution": [int(norm.graph.external_ids[v]) for v in exact_result.vertices],
            "wall_ms": round((time.perf_counter() - t0) * 1000.0, 3),
        }

    if args.mode == "both":
        report["gap"] = report["ga"]["best_size"] - report["exact"]["size"]

    _emit_report(args, report)
    return 0


def _emit_report(args, report: dict) -> None:
    if args.format == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        lines = []
        for section in ("ga", "exact"):
            if section in report:
                size = report[section].get("best_size", report[section].get("size"))
                lines.append(f"{section}_size={size}")
        if "gap" in report:
            lines.append(f"gap={report['gap']}")
        text = "\n".join(lines) + "\n"
    _write_text(args.out, text)


def cmd_bench(args) -> int:
    """Run GA and exact per spec row; one CSV row per trial, errors recorded."""
    rows = []
    with open(args.spec, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append(row)
    workers = _resolve_workers_arg(args.workers)

    fieldnames = ["instance", "n", "q", "seed", "exact_size", "ga_size",
                  "ga_generations", "ga_ms", "exact_ms", "error"]
    out_fh = sys.stdout if args.out in (None, "-") else open(args.out, "w", encoding="utf-8", newline="")
    try:
        writer = csv.DictWriter(out_fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            n = int(row["n"])
            q = float(row["q"])
            base_seed = int(row["seed"])
            trials = int(row.get("trials") or 1)
            overrides = json.loads(row["overrides"]) if row.get("overrides") else {}
            for trial in range(trials):
                seed = base_seed + trial
                record = {"instance": f"G(n={n},q={q},seed={seed})",
                          "n": n, "q": q, "seed": seed, "error": ""}
                try:
                    g = generate_random_graph(n, q, seed)
                    r = random_requirements(g, seed + 1)
                    params = engine.GaParams(master_seed=seed + 2, workers=workers,
                                             **overrides)
                    t0 = time.perf_counter()
                    ga_result = engine.run(g, r, params)
                    record["ga_ms"] = round((time.perf_counter() - t0) * 1000.0, 3)
                    record["ga_size"] = ga_result.best_size
                    record["ga_generations"] = ga_result.generations
                    t0 = time.perf_counter()
                    exact_result = exact.exact_backtracking(g, r, workers=workers or 1)
                    record["exact_ms"] = round((time.perf_counter() - t0) * 1000.0, 3)
                    record["exact_size"] = exact_result.size
                except Exception as exc:  # per-row failures must not stop the sweep
                    record["error"] = f"{type(exc).__name__}: {exc}"
                writer.writerow(record)
    finally:
        if out_fh is not sys.stdout:
            out_fh.close()
    return 0


def cmd_verify(args) -> int:
    """Replay a solve report against its instance and recheck feasibility."""
    g, values, _, _ = _load_instance(args.graph, args.requirements)
    norm = _normalize(g, values)
    report = json.loads(Path(args.report).read_text(encoding="utf-8"))
    checked = 0
    for section in ("ga", "exact"):
        if section not in report:
            continue
        entry = report[section]
        solution = entry.get("solution", [])
        claimed = entry.get("best_size", entry.get("size"))
        if norm.graph is None:
            ok = len(solution) == 0
        else:
            ext = norm.graph.external_ids
            positions = np.searchsorted(ext, solution)
            if np.any(positions >= len(ext)) or \
                    not np.array_equal(ext[positions], np.asarray(solution, dtype=np.int64)):
                print(f"{section}: solution contains unknown vertices")
                return 1
            ind = Individual.from_vertices(norm.graph.n, positions)
            ok = is_feasible(norm.graph, norm.requirements, ind) and ind.size == claimed
        print(f"{section}: size={claimed} feasible={ok}")
        if not ok:
            return 1
        checked += 1
    if checked == 0:
        print("report contains no solutions to verify")
        return 1
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tss",
        description="Target Set Selection: census-driven GA and exact solvers")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a random connected instance")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--q", type=float, required=True)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--out", required=True, help="output path prefix")
    p_gen.set_defaults(func=cmd_gen)

    p_pre = sub.add_parser("preprocess", help="clean an edge list into a binary instance")
    p_pre.add_argument("--in", dest="input", required=True)
    p_pre.add_argument("--out", required=True)
    p_pre.add_argument("--requirements", default=None,
                       help="optionally embed thresholds: file:PATH | random:SEED | cap:K")
    p_pre.add_argument("--report", default=None, help="also write the report here")
    p_pre.set_defaults(func=cmd_preprocess)

    p_solve = sub.add_parser("solve", help="solve an instance")
    p_solve.add_argument("--graph", required=True)
    p_solve.add_argument("--requirements", default=None,
                         help="file:PATH | random:SEED | cap:K (default: embedded)")
    p_solve.add_argument("--mode", choices=("ga", "exact", "both"), default="ga")
    p_solve.add_argument("--workers", default=None,
                         help="worker count (default: TSS_WORKERS or all cores)")
    p_solve.add_argument("--seed", type=int, default=None)
    p_solve.add_argument("--time-limit", type=float, default=None)
    p_solve.add_argument("--g-min", type=int, default=10)
    p_solve.add_argument("--g-max", type=int, default=500)
    p_solve.add_argument("--g-w-improvement", type=int, default=50)
    p_solve.add_argument("--w-size", type=float, default=0.98)
    p_solve.add_argument("--w-scensus", type=float, default=0.02)
    p_solve.add_argument("--w-degree", type=float, default=0.98)
    p_solve.add_argument("--w-vcensus", type=float, default=0.02)
    p_solve.add_argument("--p-prob-cross", type=float, default=0.3)
    p_solve.add_argument("--p-mutation", type=float, default=0.025)
    p_solve.add_argument("--exact-max-n", type=int, default=exact.DEFAULT_BACKTRACK_LIMIT)
    p_solve.add_argument("--out", default=None, help="report path (default: stdout)")
    p_solve.add_argument("--format", choices=("json", "text"), default="json")
    p_solve.add_argument("--census-dump", default=None,
                         help="write per-vertex census CSV here")
    p_solve.add_argument("--quiet", action="store_true",
                         help="suppress per-generation progress lines")
    p_solve.set_defaults(func=cmd_solve)

    p_bench = sub.add_parser("bench", help="sweep instances from a CSV spec")
    p_bench.add_argument("--spec", required=True,
                         help="CSV with columns n,q,seed[,trials][,overrides]")
    p_bench.add_argument("--out", default=None, help="results CSV (default: stdout)")
    p_bench.add_argument("--workers", default=None)
    p_bench.set_defaults(func=cmd_bench)

    p_verify = sub.add_parser("verify", help="recheck a solve report's solutions")
    p_verify.add_argument("--graph", required=True)
    p_verify.add_argument("--requirements", default=None)
    p_verify.add_argument("--report", required=True)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (instance_io.BinaryFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
