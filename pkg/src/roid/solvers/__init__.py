"""Decomposition and completion solvers."""

from .hooi import solve_hooi
from .model import SolverConfig, SolverResult, TuckerModel
from .roid import solve_full, solve_groid, solve_roid
from .shooi import solve_shooi, update_z
from .updates import core_update, factor_update, graph_factor_update, interpolate_x, shrink_aux

__all__ = [
    "SolverConfig",
    "SolverResult",
    "TuckerModel",
    "core_update",
    "factor_update",
    "graph_factor_update",
    "interpolate_x",
    "shrink_aux",
    "solve_full",
    "solve_groid",
    "solve_hooi",
    "solve_roid",
    "solve_shooi",
    "update_z",
]
