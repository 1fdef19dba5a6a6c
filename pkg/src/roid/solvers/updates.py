"""Block updates of the core-regularized orthogonal iteration.

Notation: ``x`` is the current (completed) data tensor, ``(u, v, w)`` the
factors, ``b = sum_n refold(G_n - Y_n / rho)`` the pull of the auxiliary
variables on the core, and ``rho`` the ADMM penalty.  For fixed factors the
optimal core is ``(A + rho * b) / (1 + 3 rho)`` with
``A = x x_1 u^T x_2 v^T x_3 w^T``, and the factors maximize
``g(u, v, w) = ||A + rho * b||_F^2``.
"""

import numpy as np

from ..datagen import make_rng
from ..errors import DimensionError, InputError
from ..linalg import ort, svds, svt
from ..tensor import multi_mode_product, refold, unfold

__all__ = [
    "aux_pull",
    "check_laplacian",
    "core_objective",
    "core_update",
    "factor_objective",
    "factor_step",
    "factor_update",
    "graph_factor_cost",
    "graph_factor_step",
    "graph_factor_update",
    "init_factors",
    "interpolate_x",
    "laplacian_norm",
    "shrink_aux",
]


def shrink_aux(core_unfolding, multiplier, rho, lam, weight):
    """Auxiliary update ``SVT_{weight/(lam*rho)}(core_unfolding + multiplier/rho)``."""
    core_unfolding = np.asarray(core_unfolding, dtype=np.float64)
    multiplier = np.asarray(multiplier, dtype=np.float64)
    if core_unfolding.shape != multiplier.shape:
        raise DimensionError(f"unfolding {core_unfolding.shape} and multiplier {multiplier.shape} differ")
    return svt(core_unfolding + multiplier / rho, weight / (lam * rho))


def aux_pull(aux, multipliers, rho, rank):
    """``sum_n refold(G_n - Y_n / rho)``."""
    b = np.zeros(rank)
    for n, (g, y) in enumerate(zip(aux, multipliers), start=1):
        b += refold(g - y / rho, n, rank)
    return b


def _partial(x, factors, n):
    """``x`` projected on every factor except mode ``n``."""
    mats = [f for f in factors]
    mats[n - 1] = None
    return multi_mode_product(x, *mats, transpose=True)


def factor_objective(x, factors, b, rho):
    """``g(u, v, w) = ||A + rho * b||_F^2``."""
    a = multi_mode_product(x, *factors, transpose=True)
    return float(np.sum((a + rho * b) ** 2))


def core_objective(x, core, factors, aux, multipliers, rho):
    """Objective of the joint core/factor subproblem for a given core."""
    val = 0.5 * float(np.sum((x - multi_mode_product(core, *factors)) ** 2))
    for n, (g, y) in enumerate(zip(aux, multipliers), start=1):
        val += 0.5 * rho * float(np.sum((unfold(core, n) - g + y / rho) ** 2))
    return val


def factor_step(x, factors, b, rho, n):
    """New mode-``n`` factor given the current ``factors``; returns ``(factor, partial)``.

    ``partial`` is ``x`` projected on every factor except mode ``n``.
    """
    partial = _partial(x, factors, n)
    m = unfold(partial, n)
    if rho == 0:
        return svds(m, factors[n - 1].shape[1]), partial
    target = factors[n - 1].T @ m + rho * unfold(b, n)
    return ort(m @ target.T), partial


def factor_update(x, factors, b, rho, return_partial=False):
    """Gauss-Seidel sweep over the three factors.

    Mode ``n`` uses the already updated factors of the earlier modes.  With
    ``M`` the mode-``n`` unfolding of ``x`` projected on the other factors,
    the new factor is ``ORT(M (U^T M + rho * b_(n))^T)``: the Procrustes
    maximizer of the linearization of the convex function ``g`` at the
    current factor, so ``g`` never decreases.  For ``rho == 0`` the exact
    maximizer is available (the dominant left singular subspace of ``M``),
    which is the classic HOOI step.

    Returns
    -------
    factors : tuple of three matrices
    partial : ndarray
        Only with ``return_partial``: ``x`` projected on the new first two
        factors, from which the core update follows with one more product.
    """
    factors = list(factors)
    b = np.asarray(b, dtype=np.float64)
    rank = tuple(f.shape[1] for f in factors)
    if b.shape != rank:
        raise DimensionError(f"b has shape {b.shape}, expected core shape {rank}")
    partial = None
    for n in (1, 2, 3):
        factors[n - 1], partial = factor_step(x, factors, b, rho, n)
    if return_partial:
        return tuple(factors), partial
    return tuple(factors)


def core_update(x, u, v, w, b, rho, partial=None):
    """Closed-form core ``(A + rho * b) / (1 + 3 rho)``.

    ``partial`` may carry ``x x_1 u^T x_2 v^T`` to save the two large products.
    """
    if partial is None:
        a = multi_mode_product(x, u, v, w, transpose=True)
    else:
        a = multi_mode_product(partial, None, None, w, transpose=True)
    return (a + rho * np.asarray(b)) / (1.0 + 3.0 * rho)


def interpolate_x(omega, model=None, recon=None):
    """Observed values on ``omega``, model reconstruction elsewhere."""
    if recon is None:
        recon = model.full()
    if tuple(np.shape(recon)) != omega.dims:
        raise DimensionError(f"reconstruction shape {np.shape(recon)} does not match {omega.dims}")
    out = np.array(recon, dtype=np.float64, order="F", copy=True)
    flat = out.reshape(-1, order="F")
    flat[omega.linear] = omega.values
    return flat.reshape(omega.dims, order="F")


def laplacian_norm(lap, steps=20):
    """Spectral norm of a symmetric PSD matrix by ``steps`` power iterations."""
    lap = np.asarray(lap, dtype=np.float64)
    if not np.any(lap):
        return 0.0
    vec = make_rng(0).standard_normal(lap.shape[0])
    est = 0.0
    for _ in range(steps):
        nxt = lap @ vec
        norm = np.linalg.norm(nxt)
        if norm == 0.0:
            return 0.0
        est = norm / np.linalg.norm(vec)
        vec = nxt / norm
    return float(est)


def check_laplacian(lap, size, atol=1e-10):
    lap = np.asarray(lap, dtype=np.float64)
    if lap.shape != (size, size):
        raise DimensionError(f"Laplacian has shape {lap.shape}, expected {(size, size)}")
    if np.max(np.abs(lap - lap.T), initial=0.0) > atol * max(1.0, np.max(np.abs(lap), initial=0.0)):
        raise InputError("Laplacian is not symmetric")
    return lap


def graph_factor_cost(x, factors, b, rho, laplacians, mu):
    """``-g / (2 (1 + 3 rho)) + mu / 2 * sum_n trace(F_n^T L_n F_n)``."""
    h = sum(float(np.sum(f * (lap @ f))) for f, lap in zip(factors, laplacians))
    return -factor_objective(x, factors, b, rho) / (2.0 * (1.0 + 3.0 * rho)) + 0.5 * mu * h


def graph_factor_step(x, factors, b, rho, lap, mu, n, lap_norm=None):
    """Linearized mode-``n`` step of the graph-regularized model.

    The new factor is
    ``ORT((M M^T - mu (1 + 3 rho) L) U + rho M b_(n)^T + (1 + 3 rho) tau U)``
    with ``tau = ||M||_2^2 / (1 + 3 rho) + mu ||L||_2``, an upper bound on the
    curvature of the cost, so the linearized problem majorizes the cost and
    the step never increases it.  Returns ``(factor, partial)``.
    """
    if lap_norm is None:
        lap_norm = laplacian_norm(lap)
    scale = 1.0 + 3.0 * rho
    partial = _partial(x, factors, n)
    m = unfold(partial, n)
    f = factors[n - 1]
    tau = np.linalg.norm(m, 2) ** 2 / scale + mu * lap_norm
    arg = m @ (m.T @ f) + rho * (m @ unfold(b, n).T) + scale * tau * f
    if mu:
        arg -= mu * scale * (lap @ f)
    return ort(arg), partial


def graph_factor_update(x, factors, b, rho, laplacians, mu, lap_norms=None, return_partial=False):
    """Gauss-Seidel sweep of :func:`graph_factor_step` over the three modes."""
    factors = list(factors)
    b = np.asarray(b, dtype=np.float64)
    if lap_norms is None:
        lap_norms = [laplacian_norm(lap) for lap in laplacians]
    partial = None
    for n in (1, 2, 3):
        factors[n - 1], partial = graph_factor_step(
            x, factors, b, rho, laplacians[n - 1], mu, n, lap_norms[n - 1]
        )
    if return_partial:
        return tuple(factors), partial
    return tuple(factors)


def init_factors(x, rank, init="hosvd", seed=0):
    """Starting factors: leading singular subspaces of the unfoldings of ``x``
    (``"hosvd"``) or QR of seeded Gaussian matrices (``"random"``)."""
    if init == "hosvd":
        return tuple(svds(unfold(x, n), rank[n - 1]) for n in (1, 2, 3))
    rng = make_rng(seed)
    return tuple(np.linalg.qr(rng.standard_normal((x.shape[n], rank[n])))[0] for n in range(3))
