"""Shared ADMM bookkeeping: penalty adaptation, residuals, stopping rule, traces."""

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, DimensionError
from .tensor import multi_mode_product, unfold

__all__ = [
    "AdmmState",
    "IterationTrace",
    "TraceRecord",
    "converged",
    "penalty_update",
    "residuals",
]

RHO0 = 1e-2
GAMMA = 2.0
RHO_MIN = 1e-6
RHO_MAX = 1e6


def penalty_update(rho, r, s, gamma=GAMMA, rho_max=RHO_MAX, rho_min=RHO_MIN):
    """Residual-balancing penalty rule.

    ``rho`` grows by ``gamma`` when the primal residual exceeds ten times the
    dual residual, shrinks by ``gamma`` in the opposite case, and is then
    clamped to ``[rho_min, rho_max]``.
    """
    if r > 10.0 * s:
        rho = gamma * rho
    elif s > 10.0 * r:
        rho = rho / gamma
    return min(max(rho, rho_min), rho_max)


def residuals(core_prev, core, aux, rho, x_prev=None, x=None, factors=None):
    """Primal and dual residuals of the core-splitting ADMM.

    Parameters
    ----------
    core_prev, core : ndarray
        Core tensor before and after the sweep.
    aux : sequence of three matrices
        Auxiliary unfoldings ``G_1, G_2, G_3`` after the sweep.
    rho : float
        Penalty used during the sweep.
    x_prev, x : ndarray, optional
        Completed tensor before and after the sweep.  Omitted when the data
        tensor is fixed.
    factors : tuple of three matrices, optional
        Updated factors, needed with ``x_prev``/``x``.

    Returns
    -------
    r : float
        ``max_n ||unfold(core, n) - aux[n]||_F``.
    s : float
        ``rho * max(max_n ||unfold(core - core_prev, n)||_F,
        ||(x - x_prev) x_1 U^T x_2 V^T x_3 W^T||_F)``.
    """
    core = np.asarray(core)
    core_prev = np.asarray(core_prev)
    if core.shape != core_prev.shape:
        raise DimensionError(f"core shapes differ: {core_prev.shape} vs {core.shape}")
    r = 0.0
    for n, g in enumerate(aux, start=1):
        cn = unfold(core, n)
        if np.shape(g) != cn.shape:
            raise DimensionError(f"aux {n} has shape {np.shape(g)}, expected {cn.shape}")
        r = max(r, float(np.linalg.norm(cn - g)))
    # the unfoldings of one tensor share the Frobenius norm
    s = float(np.linalg.norm(core - core_prev))
    if x is not None and x_prev is not None:
        if np.shape(x) != np.shape(x_prev):
            raise DimensionError(f"x shapes differ: {np.shape(x_prev)} vs {np.shape(x)}")
        dx = multi_mode_product(np.asarray(x) - np.asarray(x_prev), *factors, transpose=True)
        s = max(s, float(np.linalg.norm(dx)))
    return r, rho * s


def converged(aux, core_unfoldings, t_norm, tol):
    """Stopping rule ``max_n ||G_(n) - G_n||_F / ||T||_F < tol``."""
    if not t_norm > 0:
        raise DegenerateInputError("observed tensor has zero norm; relative stopping rule undefined")
    gap = max(float(np.linalg.norm(np.asarray(c) - np.asarray(g))) for c, g in zip(core_unfoldings, aux))
    return gap / t_norm < tol


@dataclass
class AdmmState:
    """Mutable state of one solver run."""

    rho: float
    aux: list = None
    multipliers: list = None
    iteration: int = 0
    r: float = float("inf")
    s: float = float("inf")


@dataclass(frozen=True)
class TraceRecord:
    iter: int
    r: float
    s: float
    rho: float
    objective: float
    rse: float = float("nan")


@dataclass
class IterationTrace:
    """Per-iteration diagnostics of a solver run."""

    records: list = field(default_factory=list)

    FIELDS = ("iter", "r", "s", "rho", "objective", "rse")

    def append(self, *args, **kwargs):
        self.records.append(TraceRecord(*args, **kwargs))

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def column(self, name):
        return np.array([getattr(rec, name) for rec in self.records])

    def to_csv(self, path=None):
        """Write ``iter,r,s,rho,objective,rse`` rows; returns the text when ``path`` is None."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.FIELDS)
        for rec in self.records:
            writer.writerow([rec.iter] + [repr(float(getattr(rec, f))) for f in self.FIELDS[1:]])
        text = buf.getvalue()
        if path is None:
            return text
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
        return None
