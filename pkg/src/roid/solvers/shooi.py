"""ADMM for the sparse-observation orthogonal iteration (no core regularizer).

The observed entries are matched by an auxiliary tensor ``Z`` that is tied to
the Tucker reconstruction through a tensor multiplier ``Y``.  Each sweep fits
a rank-``d`` Tucker model to ``Z + Y / rho`` by one HOOI pass, refreshes ``Z``
in closed form, then updates ``Y`` and ``rho``.
"""

import numpy as np

from ..admm import AdmmState, IterationTrace, penalty_update
from ..linalg import svds
from ..metrics import rse
from ..tensor import multi_mode_product, unfold
from .model import SolverResult, TuckerModel
from .roid import _check_rank, _observed, _zero_result
from .updates import init_factors

__all__ = ["solve_shooi", "update_z"]


def update_z(t_obs, mask, recon, multiplier, rho):
    """Closed-form ``Z`` step.

    ``(T + rho R - Y) / (1 + rho)`` on observed entries and ``R - Y / rho``
    elsewhere, where ``R`` is the current reconstruction.
    """
    free = recon - multiplier / rho
    if mask is None:
        return free
    fitted = (t_obs + rho * recon - multiplier) / (1.0 + rho)
    return np.where(mask, fitted, free)


def _hooi_pass(h, factors, rank):
    factors = list(factors)
    partial = None
    for n in (1, 2, 3):
        mats = list(factors)
        mats[n - 1] = None
        partial = multi_mode_product(h, *mats, transpose=True)
        factors[n - 1] = svds(unfold(partial, n), rank[n - 1])
    core = multi_mode_product(partial, None, None, factors[2], transpose=True)
    return tuple(factors), core


def solve_shooi(omega, config, reference=None, callback=None):
    """Complete a tensor by orthogonal iteration on an ADMM-relaxed target.

    Uses ``rank``, ``rho0``, ``gamma``, ``rho_min``, ``rho_max``, ``tol``,
    ``maxiter``, ``init`` and ``seed`` from ``config``; ``lam`` and ``mu``
    play no role.  Converged means ``||Z - R||_F / ||T_omega||_F < tol``.

    Returns
    -------
    SolverResult
        ``completed`` holds the observations on ``omega`` and the
        reconstruction elsewhere.
    """
    t_obs = _observed(omega)
    dims = t_obs.shape
    rank = config.rank
    _check_rank(dims, rank)
    t_norm = float(np.linalg.norm(t_obs))
    if t_norm == 0.0:
        return _zero_result(dims, config, t_obs)

    mask = omega.mask()
    factors = init_factors(t_obs, rank, config.init, config.seed)
    core = multi_mode_product(t_obs, *factors, transpose=True)
    recon = multi_mode_product(core, *factors)
    z = t_obs.copy()
    y = np.zeros(dims)
    state = AdmmState(rho=config.rho0)
    trace = IterationTrace()
    converged = False

    for k in range(1, config.maxiter + 1):
        rho = state.rho
        factors, core = _hooi_pass(z + y / rho, factors, rank)
        new_recon = multi_mode_product(core, *factors)
        z = update_z(t_obs, mask, new_recon, y, rho)
        y = y + rho * (z - new_recon)
        r = float(np.linalg.norm(z - new_recon))
        s = rho * float(np.linalg.norm(new_recon - recon))
        recon = new_recon
        state.r, state.s, state.iteration = r, s, k
        state.rho = penalty_update(rho, r, s, config.gamma, config.rho_max, config.rho_min)
        if config.record_trace:
            err = rse(recon, reference) if reference is not None else float("nan")
            fit = 0.5 * float(np.sum((t_obs - recon)[mask] ** 2))
            trace.append(k, r, s, rho, fit, err)
        if callback is not None:
            callback(k, TuckerModel(core, *factors))
        if r / t_norm < config.tol:
            converged = True
            break

    state.multipliers = [y]
    model = TuckerModel(core, *factors)
    completed = np.where(mask, t_obs, recon)
    return SolverResult(model, completed, state.iteration, converged, trace, state)
