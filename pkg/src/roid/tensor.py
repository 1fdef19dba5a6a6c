"""Dense third-order tensor algebra.

Tensors are plain ``float64`` numpy arrays of shape ``(I1, I2, I3)``.  Modes
are numbered 1, 2, 3 in every public function.  The mode-n unfolding follows
the column-major index map: for mode 1 the column index of ``x[i1, i2, i3]``
is ``i2 + I2 * i3`` (0-based), so unfolding and refolding are Fortran-order
reshapes of the array with mode ``n`` moved to the front.

Partially observed tensors are described by :class:`ObservationSet`, whose
indices are 1-based triples.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InputError, ModeError

__all__ = [
    "ObservationSet",
    "as_tensor3",
    "frobenius",
    "hadamard",
    "inner",
    "mode_product",
    "multi_mode_product",
    "project",
    "refold",
    "unfold",
]


def as_tensor3(values, copy=False):
    """Validate and convert ``values`` to a finite float64 array of order 3.

    Raises
    ------
    DimensionError
        If the input is not three-dimensional or has an empty mode.
    InputError
        If any entry is NaN or infinite.
    """
    arr = np.array(values, dtype=np.float64, copy=copy) if copy else np.asarray(values, dtype=np.float64)
    if arr.ndim != 3:
        raise DimensionError(f"expected a third-order tensor, got ndim={arr.ndim}")
    if min(arr.shape) < 1:
        raise DimensionError(f"all dimensions must be positive, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError("tensor contains NaN or Inf entries")
    return arr


def _check_mode(n):
    if n not in (1, 2, 3):
        raise ModeError(f"mode must be 1, 2 or 3, got {n!r}")


def unfold(t, n):
    """Mode-``n`` matricization, shape ``I_n x prod_{j != n} I_j``.

    >>> x = np.arange(1, 9, dtype=float).reshape((2, 2, 2), order="F")
    >>> unfold(x, 1)
    array([[1., 3., 5., 7.],
           [2., 4., 6., 8.]])
    """
    _check_mode(n)
    t = np.asarray(t)
    if t.ndim != 3:
        raise DimensionError(f"expected a third-order tensor, got ndim={t.ndim}")
    return np.moveaxis(t, n - 1, 0).reshape((t.shape[n - 1], -1), order="F")


def refold(m, n, dims):
    """Inverse of :func:`unfold` for mode ``n`` and tensor dimensions ``dims``."""
    _check_mode(n)
    m = np.asarray(m, dtype=np.float64)
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3:
        raise DimensionError(f"dims must be a triple, got {dims}")
    rest = [d for k, d in enumerate(dims) if k != n - 1]
    expected = (dims[n - 1], rest[0] * rest[1])
    if m.shape != expected:
        raise DimensionError(f"mode-{n} unfolding of {dims} must have shape {expected}, got {m.shape}")
    folded = m.reshape((dims[n - 1], rest[0], rest[1]), order="F")
    return np.moveaxis(folded, 0, n - 1)


def mode_product(t, m, n):
    """n-mode product ``t x_n m``.

    ``m`` has shape ``J x I_n``; the result replaces ``I_n`` by ``J``.
    """
    _check_mode(n)
    t = np.asarray(t, dtype=np.float64)
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[1] != t.shape[n - 1]:
        raise DimensionError(
            f"mode-{n} product needs a matrix with {t.shape[n - 1]} columns, got shape {m.shape}"
        )
    return np.moveaxis(np.tensordot(m, t, axes=([1], [n - 1])), 0, n - 1)


def multi_mode_product(t, u=None, v=None, w=None, transpose=False):
    """Apply ``x_1 u x_2 v x_3 w`` in mode order; ``None`` skips a mode.

    With ``transpose=True`` each matrix is transposed first, which is how the
    projection ``t x_1 u^T x_2 v^T x_3 w^T`` onto factor subspaces is written.
    """
    out = np.asarray(t, dtype=np.float64)
    for n, m in enumerate((u, v, w), start=1):
        if m is None:
            continue
        m = np.asarray(m)
        out = mode_product(out, m.T if transpose else m, n)
    return out


def _check_same(a, b):
    if a.shape != b.shape:
        raise DimensionError(f"tensor shapes differ: {a.shape} vs {b.shape}")


def inner(a, b):
    """Sum of elementwise products of two same-sized tensors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_same(a, b)
    return float(np.vdot(a, b))


def frobenius(t):
    """Frobenius norm ``sqrt(<t, t>)``."""
    return float(np.linalg.norm(np.ravel(t)))


def hadamard(a, b):
    """Elementwise product."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_same(a, b)
    return a * b


def project(t, omega, complement=False):
    """Keep the entries of ``t`` on ``omega`` (or on its complement), zero the rest."""
    t = np.asarray(t, dtype=np.float64)
    if tuple(t.shape) != omega.dims:
        raise DimensionError(f"tensor shape {t.shape} does not match observation dims {omega.dims}")
    mask = omega.mask()
    if complement:
        mask = ~mask
    return np.where(mask, t, 0.0)


@dataclass(eq=False)
class ObservationSet:
    """Observed entries of a third-order tensor.

    Parameters
    ----------
    dims : tuple of int
        Tensor dimensions ``(I1, I2, I3)``.
    indices : array_like of int, shape (m, 3)
        1-based index triples, pairwise distinct.
    values : array_like of float, shape (m,), optional
        Observed values.  ``None`` describes a sampling pattern only; use
        :meth:`fill` to attach values from a tensor.
    """

    dims: tuple
    indices: np.ndarray
    values: np.ndarray = None
    _linear: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        if len(self.dims) != 3 or min(self.dims) < 1:
            raise DimensionError(f"dims must be three positive integers, got {self.dims}")
        idx = np.asarray(self.indices, dtype=np.int64).reshape((-1, 3))
        lo_bad = np.any(idx < 1, axis=1)
        hi_bad = np.any(idx > np.asarray(self.dims), axis=1)
        bad = np.flatnonzero(lo_bad | hi_bad)
        if bad.size:
            raise DimensionError(f"index {tuple(idx[bad[0]])} outside dims {self.dims}")
        self.indices = idx
        self._linear = np.ravel_multi_index(tuple((idx - 1).T), self.dims, order="F")
        if np.unique(self._linear).size != self._linear.size:
            raise InputError("duplicate index triples in observation set")
        if self.values is not None:
            vals = np.asarray(self.values, dtype=np.float64).reshape(-1)
            if vals.shape[0] != idx.shape[0]:
                raise DimensionError(f"{idx.shape[0]} indices but {vals.shape[0]} values")
            if not np.all(np.isfinite(vals)):
                raise InputError("observed values contain NaN or Inf")
            self.values = vals

    @classmethod
    def full(cls, t):
        """Every entry of ``t`` observed."""
        t = as_tensor3(t)
        idx = np.indices(t.shape).reshape(3, -1, order="F").T + 1
        return cls(t.shape, idx, t.reshape(-1, order="F"))

    @classmethod
    def from_linear(cls, dims, linear, values=None):
        """Build from 0-based column-major linear indices."""
        idx = np.stack(np.unravel_index(np.asarray(linear, dtype=np.int64), tuple(dims), order="F"), axis=1) + 1
        return cls(dims, idx, values)

    def __len__(self):
        return self.indices.shape[0]

    def __eq__(self, other):
        if not isinstance(other, ObservationSet) or self.dims != other.dims or len(self) != len(other):
            return NotImplemented if not isinstance(other, ObservationSet) else False
        a, b = np.argsort(self._linear), np.argsort(other._linear)
        if not np.array_equal(self._linear[a], other._linear[b]):
            return False
        if self.values is None or other.values is None:
            return self.values is None and other.values is None
        return bool(np.array_equal(self.values[a], other.values[b]))

    @property
    def linear(self):
        """0-based column-major linear indices of the observed entries."""
        return self._linear

    @property
    def ratio(self):
        return len(self) / float(np.prod(self.dims))

    def mask(self):
        """Boolean indicator tensor, true exactly on observed entries."""
        m = np.zeros(int(np.prod(self.dims)), dtype=bool)
        m[self._linear] = True
        return m.reshape(self.dims, order="F")

    def fill(self, t):
        """Same indices, values read from tensor ``t``."""
        t = as_tensor3(t)
        if tuple(t.shape) != self.dims:
            raise DimensionError(f"tensor shape {t.shape} does not match observation dims {self.dims}")
        return ObservationSet(self.dims, self.indices, t.reshape(-1, order="F")[self._linear])

    def dense(self):
        """Observed values scattered into a zero tensor, i.e. the projection onto the set."""
        if self.values is None:
            raise InputError("observation set carries no values")
        out = np.zeros(int(np.prod(self.dims)))
        out[self._linear] = self.values
        return out.reshape(self.dims, order="F")

    def entries(self):
        """Iterate over ``(i1, i2, i3, value)`` with 1-based indices."""
        vals = self.values if self.values is not None else np.full(len(self), np.nan)
        for (i, j, k), v in zip(self.indices.tolist(), vals.tolist()):
            yield i, j, k, v
