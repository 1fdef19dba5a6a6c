"""Matrix operators used by the solvers.

All decompositions are economy-size SVDs, so the work scales with the smaller
matrix dimension and no Gram matrix is ever formed.
"""

import warnings

import numpy as np

from .errors import ConfigError, DimensionError, InputError, NonUniquePolarWarning, RangeError
from .tensor import unfold

__all__ = [
    "check_weights",
    "kronecker",
    "ort",
    "schatten_norm",
    "svds",
    "svt",
    "tensor_schatten",
]

# relative cutoff below which a singular value counts as zero in rank decisions
RANK_RTOL = 1e-12


def _as_matrix(m):
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise InputError("matrix contains NaN or Inf entries")
    return m


def svt(m, mu, return_singular_values=False):
    r"""Singular value thresholding, the proximal map of ``mu * ||.||_*``.

    Returns :math:`\bar U \operatorname{diag}(\max(\bar\sigma - \mu, 0)) \bar V^T`
    where :math:`m = \bar U \operatorname{diag}(\bar\sigma) \bar V^T`.

    Parameters
    ----------
    m : array_like, shape (p, q)
    mu : float
        Non-negative threshold.
    return_singular_values : bool
        Also return the shrunk singular values.
    """
    m = _as_matrix(m)
    if not mu >= 0:
        raise RangeError(f"threshold must be non-negative, got {mu}")
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    s = np.maximum(s - mu, 0.0)
    keep = s > 0
    out = (u[:, keep] * s[keep]) @ vt[keep]
    if return_singular_values:
        return out, s
    return out


def ort(a):
    """Polar factor ``U V^T`` of the tight SVD ``a = U S V^T``.

    This is the maximizer of ``trace(Q^T a)`` over matrices ``Q`` with
    orthonormal columns, i.e. the solution of the orthogonal Procrustes
    problem.  When ``a`` is rank deficient the maximizer is not unique; a
    valid polar factor is still returned and a
    :class:`~roid.errors.NonUniquePolarWarning` is emitted.
    """
    a = _as_matrix(a)
    if a.shape[0] < a.shape[1]:
        raise DimensionError(f"ort needs rows >= cols, got shape {a.shape}")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    if s.size and (s[0] == 0.0 or s[-1] <= RANK_RTOL * s[0]):
        warnings.warn(
            f"polar factor of a rank-deficient {a.shape[0]}x{a.shape[1]} matrix is not unique",
            NonUniquePolarWarning,
            stacklevel=2,
        )
    return u @ vt


def svds(m, k):
    """Leading ``k`` left singular vectors of ``m``.

    Each column is sign-normalized so that its largest-magnitude entry is
    positive, which makes the output deterministic.
    """
    m = _as_matrix(m)
    k = int(k)
    if not 1 <= k <= min(m.shape):
        raise RangeError(f"k must lie in [1, {min(m.shape)}], got {k}")
    u = np.linalg.svd(m, full_matrices=False)[0][:, :k]
    pivot = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[pivot, np.arange(k)])
    signs[signs == 0] = 1.0
    return u * signs


def kronecker(a, b):
    """Kronecker product ``[a_ij * b]``."""
    return np.kron(np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64))


def schatten_norm(m, p):
    """Schatten p-norm ``(sum_i sigma_i^p)^(1/p)`` of a matrix, ``p > 0``.

    For ``p < 1`` this is a quasi-norm.  Singular values below the
    numerical-rank cutoff ``max(shape) * eps * sigma_1`` count as zero.
    """
    if not p > 0:
        raise RangeError(f"Schatten exponent must be positive, got {p}")
    s = np.linalg.svd(_as_matrix(m), compute_uv=False)
    if p == 1:
        return float(s.sum())
    if p == 2:
        return float(np.sqrt(np.sum(s * s)))
    if s.size == 0 or s[0] == 0.0:
        return 0.0
    # roundoff-level singular values would dominate sum(s**p) for small p,
    # so keep only the numerical rank (the cutoff numpy's matrix_rank uses)
    s = s[s > s[0] * max(np.shape(m)) * np.finfo(np.float64).eps]
    # scale by the largest value to keep s**p in range
    top = s[0]
    return float(top * np.sum((s / top) ** p) ** (1.0 / p))


def check_weights(weights):
    """Return mode weights as a float triple; they must be non-negative and sum to one."""
    if weights is None:
        return (1.0 / 3.0,) * 3
    w = tuple(float(x) for x in weights)
    if len(w) != 3:
        raise ConfigError(f"need three mode weights, got {len(w)}")
    if min(w) < 0:
        raise ConfigError(f"mode weights must be non-negative, got {w}")
    if abs(sum(w) - 1.0) > 1e-12:
        raise ConfigError(f"mode weights must sum to 1, got sum {sum(w)!r}")
    return w


def tensor_schatten(t, p, weights=None):
    """Weighted sum of the Schatten p-norms of the three unfoldings of ``t``.

    With the default uniform weights this is the plain average over modes.
    """
    w = check_weights(weights)
    return float(sum(wn * schatten_norm(unfold(t, n), p) for n, wn in enumerate(w, start=1)))
