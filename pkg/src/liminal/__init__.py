"""k-liminal burning: game engine, exact solver, strategies, bounds and the QBF reduction."""

from .bounds import BoundEntry, BoundReport, bounds_for_graph, grid_bounds, hypercube_bounds, path_bounds
from .constructions import (SpecialWitness, SpernerFamily, grid_block_partition, is_kd_special,
                            rainbow_sperner, rainbow_sperner_forced, tree_pairing, verify_sperner)
from .engine import GameState, IllegalMove, Transcript, play, replay
from .graph import Graph, GraphError, build_family, read_edge_list, write_edge_list
from .reduction import QbfFormula, build_reduction, eval_qbf, parse_qdimacs, verify_reduction
from .solver import (BudgetExceeded, SolveResult, solve_burning, solve_cooling, solve_liminal,
                     value_fixed_arsonist, value_fixed_saboteur)
from .strategies import parse_arsonist, parse_saboteur

__version__ = "0.1.0"

__all__ = [
    "BoundEntry", "BoundReport", "BudgetExceeded", "GameState", "Graph", "GraphError",
    "IllegalMove", "QbfFormula", "SolveResult", "SpecialWitness", "SpernerFamily", "Transcript",
    "bounds_for_graph", "build_family", "build_reduction", "eval_qbf", "grid_block_partition",
    "grid_bounds", "hypercube_bounds", "is_kd_special", "parse_arsonist", "parse_qdimacs",
    "parse_saboteur", "path_bounds", "play", "rainbow_sperner", "rainbow_sperner_forced",
    "read_edge_list", "replay", "solve_burning", "solve_cooling", "solve_liminal", "tree_pairing",
    "value_fixed_arsonist", "value_fixed_saboteur", "verify_reduction", "verify_sperner",
    "write_edge_list",
]
