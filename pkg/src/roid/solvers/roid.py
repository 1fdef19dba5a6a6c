"""ADMM for the core trace-norm regularized orthogonal decomposition.

One loop serves three problems:

* completion (:func:`solve_roid`): the data tensor is refilled with the model
  on unobserved entries after every sweep;
* full decomposition (:func:`solve_full`): the data tensor is fixed;
* graph-regularized completion (:func:`solve_groid`): factor sweeps use the
  linearized Laplacian-penalized update.

Each sweep runs aux shrinkage, factor sweep, core update, data refill,
multiplier ascent and penalty update, in that order.
"""

import numpy as np

from ..admm import AdmmState, IterationTrace, penalty_update, residuals
from ..errors import DegenerateInputError, DimensionError
from ..metrics import rse
from ..tensor import as_tensor3, multi_mode_product, unfold
from .model import SolverResult, TuckerModel
from .updates import (
    aux_pull,
    check_laplacian,
    core_update,
    factor_update,
    graph_factor_update,
    init_factors,
    laplacian_norm,
    shrink_aux,
)

__all__ = ["solve_full", "solve_groid", "solve_roid"]


def _check_rank(dims, rank):
    if any(d > i for d, i in zip(rank, dims)):
        raise DimensionError(f"rank {rank} exceeds tensor dims {dims}")


def _zero_result(dims, config, x0):
    factors = init_factors(x0, config.rank, "random", config.seed)
    model = TuckerModel(np.zeros(config.rank), *factors)
    state = AdmmState(rho=config.rho0, r=0.0, s=0.0)
    return SolverResult(model, np.zeros(dims), 0, True, IterationTrace(), state)


def _objective(aux, lam, weights, x, recon):
    reg = sum(w * np.linalg.svd(g, compute_uv=False).sum() for w, g in zip(weights, aux)) / lam
    return float(reg + 0.5 * np.sum((x - recon) ** 2))


def _run(t_obs, omega, config, laplacians=None, reference=None, callback=None):
    """Shared ADMM loop; ``omega is None`` means the tensor is fully given."""
    dims = t_obs.shape
    rank = config.rank
    _check_rank(dims, rank)
    t_norm = float(np.linalg.norm(t_obs))
    if t_norm == 0.0:
        return _zero_result(dims, config, t_obs)

    x = t_obs
    factors = init_factors(x, rank, config.init, config.seed)
    core = multi_mode_product(x, *factors, transpose=True)
    multipliers = [np.zeros_like(unfold(core, n)) for n in (1, 2, 3)]
    state = AdmmState(rho=config.rho0, multipliers=multipliers)
    trace = IterationTrace()
    mu = config.mu
    graph = laplacians is not None
    lap_norms = [laplacian_norm(lap) for lap in laplacians] if graph else None
    mask = omega.mask() if omega is not None else None
    converged = False

    for k in range(1, config.maxiter + 1):
        rho = state.rho
        aux = [
            shrink_aux(unfold(core, n), multipliers[n - 1], rho, config.lam, config.weights[n - 1])
            for n in (1, 2, 3)
        ]
        b = aux_pull(aux, multipliers, rho, rank)
        if graph:
            factors, partial = graph_factor_update(x, factors, b, rho, laplacians, mu, lap_norms, True)
        else:
            factors, partial = factor_update(x, factors, b, rho, return_partial=True)
        new_core = core_update(x, *factors, b, rho, partial=partial)
        recon = multi_mode_product(new_core, *factors)
        if mask is not None:
            new_x = np.where(mask, t_obs, recon)
        else:
            new_x = x
        for n in (1, 2, 3):
            multipliers[n - 1] = multipliers[n - 1] + rho * (unfold(new_core, n) - aux[n - 1])
        if mask is not None:
            r, s = residuals(core, new_core, aux, rho, x, new_x, factors)
        else:
            r, s = residuals(core, new_core, aux, rho)
        core, x = new_core, new_x
        state.aux, state.r, state.s, state.iteration = aux, r, s, k
        state.rho = penalty_update(rho, r, s, config.gamma, config.rho_max, config.rho_min)
        if config.record_trace:
            err = rse(recon, reference) if reference is not None else float("nan")
            trace.append(k, r, s, rho, _objective(aux, config.lam, config.weights, x, recon), err)
        if callback is not None:
            callback(k, TuckerModel(core, *factors))
        if r / t_norm < config.tol:
            converged = True
            break

    model = TuckerModel(core, *factors)
    completed = x if mask is not None else model.full()
    return SolverResult(model, completed, state.iteration, converged, trace, state)


def _observed(omega):
    if len(omega) == 0:
        raise DegenerateInputError("observation set is empty")
    if omega.values is None:
        raise DegenerateInputError("observation set carries no values")
    return omega.dense()


def solve_roid(omega, config, reference=None, callback=None):
    """Complete a partially observed tensor with the core trace-norm model.

    Parameters
    ----------
    omega : ObservationSet
        Observed entries with values.
    config : SolverConfig
    reference : ndarray, optional
        Ground truth; when given and ``config.record_trace`` is set, the trace
        carries the RSE of each iterate.
    callback : callable, optional
        Called as ``callback(iteration, model)`` after every sweep.

    Returns
    -------
    SolverResult
        ``completed`` equals the observations on ``omega`` exactly.
    """
    return _run(_observed(omega), omega, config, reference=reference, callback=callback)


def solve_full(t, config, reference=None, callback=None):
    """Core trace-norm regularized decomposition of a fully observed tensor.

    ``completed`` is the model reconstruction.
    """
    return _run(as_tensor3(t), None, config, reference=reference, callback=callback)


def solve_groid(omega, laplacians, config, reference=None, callback=None):
    """Graph-regularized completion.

    Parameters
    ----------
    laplacians : sequence of three matrices
        Symmetric PSD ``I_n x I_n`` Laplacians; pass zeros for a mode
        without side information.  ``config.mu`` weights the graph term.

    Notes
    -----
    The linearized factor step is damped by the curvature bound, so factors
    move more slowly than in :func:`solve_roid` while the core residual
    already looks small.  Use a tighter ``tol`` (around ``1e-9``) when the
    completion itself matters.
    """
    t_obs = _observed(omega)
    laps = [check_laplacian(lap, d) for lap, d in zip(laplacians, t_obs.shape)]
    if len(laps) != 3:
        raise DimensionError(f"need three Laplacians, got {len(laps)}")
    return _run(t_obs, omega, config, laplacians=laps, reference=reference, callback=callback)

