"""Target Set Selection toolkit: census-driven GA, exact solvers, and I/O."""

from .census import CensusStore
from .engine import GaParams, RunResult, initial_aggressiveness, run
from .exact import brute_force, exact_backtracking
from .fitness import GaWeights, evaluate_generation, raw_fitness, sigma_scale
from .graph import (Graph, PreprocessReport, RequirementVector,
                    capped_requirements, generate_random_graph,
                    normalize_instance, preprocess, random_requirements)
from .individual import Individual
from .propagation import activation_closure, active_backend, is_feasible

__version__ = "0.1.0"

__all__ = [
    "CensusStore", "GaParams", "GaWeights", "Graph", "Individual",
    "PreprocessReport", "RequirementVector", "RunResult",
    "activation_closure", "active_backend", "brute_force",
    "capped_requirements", "evaluate_generation", "exact_backtracking",
    "generate_random_graph", "initial_aggressiveness", "is_feasible",
    "normalize_instance", "preprocess", "random_requirements",
    "raw_fitness", "run", "sigma_scale",
]
