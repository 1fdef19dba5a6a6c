"""Synthetic problems: low multi-linear rank tensors, sampling masks, noise, Laplacians.

Every generator draws from ``numpy.random.Generator(Philox(seed))`` so a seed
reproduces the same data on any platform.
"""

import numpy as np

from .errors import InputError, RangeError
from .tensor import ObservationSet, as_tensor3, multi_mode_product

__all__ = [
    "add_noise",
    "gen_tucker",
    "knn_affinity",
    "laplacian_from_affinity",
    "make_rng",
    "sample_mask",
]


def make_rng(seed):
    """Counter-based generator used throughout the package."""
    return np.random.Generator(np.random.Philox(seed))


def _triple(x):
    if np.ndim(x) == 0:
        return (int(x),) * 3
    x = tuple(int(v) for v in x)
    if len(x) != 3:
        raise RangeError(f"expected a scalar or a triple, got {x}")
    return x


def gen_tucker(dims, rank, seed=0, return_factors=False):
    """Random tensor of multi-linear rank ``rank``.

    The core has i.i.d. entries uniform on [0, 1] and each factor has i.i.d.
    entries uniform on [-0.5, 0.5]; the tensor is the Tucker product of the
    two.  With probability one its multi-linear rank equals ``rank``.

    Parameters
    ----------
    dims : int or tuple of int
    rank : int or tuple of int
    seed : int
    return_factors : bool
        Also return ``(core, (U1, U2, U3))``.
    """
    dims, rank = _triple(dims), _triple(rank)
    if min(dims) < 1 or min(rank) < 1:
        raise RangeError(f"dims and rank must be positive, got {dims}, {rank}")
    if any(r > d for r, d in zip(rank, dims)):
        raise RangeError(f"rank {rank} exceeds dims {dims}")
    rng = make_rng(seed)
    core = rng.uniform(0.0, 1.0, size=rank)
    factors = tuple(rng.uniform(-0.5, 0.5, size=(d, r)) for d, r in zip(dims, rank))
    t = multi_mode_product(core, *factors)
    if return_factors:
        return t, (core, factors)
    return t


def sample_mask(dims, ratio, seed=0):
    """Uniform sample of ``round(ratio * prod(dims))`` distinct entries.

    Returns an :class:`ObservationSet` without values; call
    :meth:`ObservationSet.fill` to read them from a tensor.
    """
    dims = _triple(dims)
    if not 0 < ratio <= 1:
        raise RangeError(f"sampling ratio must lie in (0, 1], got {ratio}")
    total = int(np.prod(dims))
    m = int(round(ratio * total))
    m = min(max(m, 1), total)
    # seeded Fisher-Yates shuffle of the linear index space
    picked = make_rng(seed).permutation(total)[:m]
    return ObservationSet.from_linear(dims, np.sort(picked))


def add_noise(t, nf, seed=0):
    """``t + nf * E`` with ``E`` standard Gaussian."""
    t = as_tensor3(t)
    if not nf >= 0:
        raise RangeError(f"noise factor must be non-negative, got {nf}")
    if nf == 0:
        return t.copy()
    return t + nf * make_rng(seed).standard_normal(t.shape)


def laplacian_from_affinity(w, atol=1e-10):
    """Graph Laplacian ``L = D - W`` with ``D_ii = sum_j W_ij``.

    Raises
    ------
    InputError
        If ``w`` is not square, not symmetric within ``atol``, or has
        negative entries.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise InputError(f"affinity matrix must be square, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise InputError("affinity matrix contains NaN or Inf")
    if np.any(w < 0):
        raise InputError("affinity matrix has negative entries")
    if np.max(np.abs(w - w.T), initial=0.0) > atol:
        raise InputError("affinity matrix is not symmetric")
    w = 0.5 * (w + w.T)
    return np.diag(w.sum(axis=0)) - w


def knn_affinity(points, k, sigma=None):
    """Symmetric Gaussian affinity of each row of ``points`` to its ``k`` nearest rows.

    ``W_ij = exp(-||p_i - p_j||^2 / sigma^2)`` when ``j`` is among the ``k``
    nearest neighbours of ``i`` or vice versa, zero otherwise.  ``sigma``
    defaults to the mean neighbour distance.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise InputError(f"points must be a matrix, got ndim={points.ndim}")
    n = points.shape[0]
    if not 0 <= k < n:
        raise RangeError(f"k must lie in [0, {n - 1}], got {k}")
    sq = np.sum((points[:, None, :] - points[None, :, :]) ** 2, axis=2)
    w = np.zeros((n, n))
    if k == 0:
        return w
    order = np.argsort(sq + np.diag(np.full(n, np.inf)), axis=1, kind="stable")[:, :k]
    rows = np.repeat(np.arange(n), k)
    cols = order.ravel()
    d2 = sq[rows, cols]
    if sigma is None:
        sigma = float(np.mean(np.sqrt(d2))) or 1.0
    w[rows, cols] = np.exp(-d2 / sigma**2)
    return np.maximum(w, w.T)
