"""Containers shared by the solvers."""

import hashlib
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from ..admm import GAMMA, RHO0, RHO_MAX, RHO_MIN, IterationTrace
from ..errors import ConfigError
from ..linalg import check_weights
from ..tensor import multi_mode_product

__all__ = ["SolverConfig", "SolverResult", "TuckerModel"]

INITS = ("hosvd", "random")


@dataclass
class TuckerModel:
    """Core tensor with column-orthonormal factors, ``core x_1 u x_2 v x_3 w``."""

    core: np.ndarray
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    @property
    def factors(self):
        return (self.u, self.v, self.w)

    @property
    def rank(self):
        return tuple(self.core.shape)

    @property
    def dims(self):
        return (self.u.shape[0], self.v.shape[0], self.w.shape[0])

    def full(self):
        """Reconstructed tensor."""
        return multi_mode_product(self.core, self.u, self.v, self.w)

    def orthonormality_error(self):
        """Largest ``||F^T F - I||_F`` over the three factors."""
        return max(float(np.linalg.norm(f.T @ f - np.eye(f.shape[1]))) for f in self.factors)


@dataclass
class SolverConfig:
    """Parameters of the ADMM solvers.

    ``lam`` scales the data term against the core trace norm (larger means
    weaker regularization); ``weights`` split the trace norm over the three
    core unfoldings and give per-mode thresholds ``weights[n] / (lam * rho)``.
    """

    rank: tuple
    lam: float = 100.0
    mu: float = 0.0
    weights: tuple = None
    rho0: float = RHO0
    gamma: float = GAMMA
    rho_min: float = RHO_MIN
    rho_max: float = RHO_MAX
    tol: float = 1e-5
    maxiter: int = 500
    init: str = "hosvd"
    seed: int = 0
    record_trace: bool = False

    def __post_init__(self):
        rank = (self.rank,) * 3 if np.ndim(self.rank) == 0 else tuple(self.rank)
        if len(rank) != 3 or min(int(r) for r in rank) < 1:
            raise ConfigError(f"rank must be three positive integers, got {self.rank}")
        self.rank = tuple(int(r) for r in rank)
        self.weights = check_weights(self.weights)
        if not self.lam > 0:
            raise ConfigError(f"lam must be positive, got {self.lam}")
        if not self.mu >= 0:
            raise ConfigError(f"mu must be non-negative, got {self.mu}")
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if int(self.maxiter) < 1:
            raise ConfigError(f"maxiter must be at least 1, got {self.maxiter}")
        self.maxiter = int(self.maxiter)
        if not self.gamma > 1:
            raise ConfigError(f"gamma must exceed 1, got {self.gamma}")
        if not 0 < self.rho_min <= self.rho0 <= self.rho_max:
            raise ConfigError(
                f"need 0 < rho_min <= rho0 <= rho_max, got {self.rho_min}, {self.rho0}, {self.rho_max}"
            )
        if self.init not in INITS:
            raise ConfigError(f"init must be one of {INITS}, got {self.init!r}")

    def digest(self):
        """Short stable hash of every field, for result provenance."""
        payload = json.dumps(asdict(self), sort_keys=True, default=str)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class SolverResult:
    model: TuckerModel
    completed: np.ndarray
    iterations: int
    converged: bool
    trace: IterationTrace = field(default_factory=IterationTrace)
    state: object = None
