"""Contiguous, population-balanced districting by adaptive randomized rounding."""
from .arr import ArrConfig, ArrResult, TrialTrace, run_arr
from .graph import AdjacencyGraph, GraphError, all_pairs_distances, build_graph, grid_graph
from .model import ProblemInstance, conditional_objective, is_feasible, make_instance
from .rounding import round_to_plan

__version__ = "0.1.0"
