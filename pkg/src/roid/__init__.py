"""Core trace-norm regularized orthogonal iteration for third-order tensors.

Decomposition and completion of low multi-linear rank tensors, with a graph
regularized variant, an ADMM-relaxed orthogonal iteration and classic HOOI
as baselines, plus synthetic data, metrics and plain-text file formats.
"""

from .datagen import add_noise, gen_tucker, knn_affinity, laplacian_from_affinity, sample_mask
from .metrics import auc, rse
from .solvers import (
    SolverConfig,
    SolverResult,
    TuckerModel,
    solve_full,
    solve_groid,
    solve_hooi,
    solve_roid,
    solve_shooi,
)
from .tensor import ObservationSet

__version__ = "0.1.0"

__all__ = [
    "ObservationSet",
    "SolverConfig",
    "SolverResult",
    "TuckerModel",
    "add_noise",
    "auc",
    "gen_tucker",
    "knn_affinity",
    "laplacian_from_affinity",
    "rse",
    "sample_mask",
    "solve_full",
    "solve_groid",
    "solve_hooi",
    "solve_roid",
    "solve_shooi",
]
