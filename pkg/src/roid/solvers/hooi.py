"""Higher-order orthogonal iteration for fully observed tensors."""

import numpy as np

from ..linalg import svds
from ..tensor import as_tensor3, multi_mode_product, unfold
from .model import TuckerModel
from .roid import _check_rank

__all__ = ["solve_hooi"]


def solve_hooi(t, rank, tol=1e-10, maxiter=100, return_fits=False):
    """Rank-``(d1, d2, d3)`` Tucker approximation by alternating subspace fits.

    Starts from the truncated HOSVD and sweeps the three factors, each set to
    the leading left singular vectors of the tensor projected on the other two.
    Stops when the fit ``||t - reconstruction||_F`` improves by less than
    ``tol * ||t||_F`` or after ``maxiter`` sweeps.

    Parameters
    ----------
    t : array_like, shape (I1, I2, I3)
    rank : int or tuple of three ints
    tol : float
    maxiter : int
    return_fits : bool
        Also return the fit after the initialization and after every sweep.

    Returns
    -------
    TuckerModel or (TuckerModel, list of float)
    """
    t = as_tensor3(t)
    rank = (int(rank),) * 3 if np.ndim(rank) == 0 else tuple(int(r) for r in rank)
    _check_rank(t.shape, rank)
    t_norm = float(np.linalg.norm(t))
    factors = [svds(unfold(t, n), rank[n - 1]) for n in (1, 2, 3)]
    core = multi_mode_product(t, *factors, transpose=True)
    # orthonormal factors: ||t - recon||^2 = ||t||^2 - ||core||^2
    def fit_of(c):
        return float(np.sqrt(max(t_norm**2 - float(np.sum(c * c)), 0.0)))

    fits = [fit_of(core)]
    for _ in range(maxiter):
        partial = None
        for n in (1, 2, 3):
            mats = list(factors)
            mats[n - 1] = None
            partial = multi_mode_product(t, *mats, transpose=True)
            factors[n - 1] = svds(unfold(partial, n), rank[n - 1])
        core = multi_mode_product(partial, None, None, factors[2], transpose=True)
        fits.append(fit_of(core))
        if fits[-2] - fits[-1] <= tol * t_norm:
            break
    model = TuckerModel(core, *factors)
    if return_fits:
        return model, fits
    return model
