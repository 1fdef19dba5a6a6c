"""Plain-text formats for tensors, observation sets and result tables.

Coordinate (COO) files::

    # optional comment lines
    I1 I2 I3
    i1 i2 i3 value
    ...

Dense files carry the same header followed by ``I1*I2*I3`` values in
column-major order (first index fastest), whitespace separated.  Values are
written with 17 significant digits so round trips are exact.
"""

import csv
import os

import numpy as np

from .errors import ParseError, ValidationError
from .tensor import ObservationSet, as_tensor3

__all__ = [
    "RESULT_FIELDS",
    "append_results",
    "read_coo",
    "read_dense",
    "read_results",
    "write_coo",
    "write_dense",
    "write_results",
    "write_results_stream",
]

RESULT_FIELDS = (
    "method", "dims", "rank", "ratio", "lambda", "seed",
    "rse", "auc", "iters", "seconds", "converged", "config_hash",
)


def _fmt(v):
    return format(float(v), ".17g")


def _content_lines(fh):
    for lineno, line in enumerate(fh, start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            yield lineno, stripped


def _parse_header(lineno, line):
    parts = line.split()
    if len(parts) != 3:
        raise ParseError(f"header must hold three dimensions, got {line!r}", lineno)
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        raise ParseError(f"non-integer dimension in header {line!r}", lineno) from None
    if min(dims) < 1:
        raise ParseError(f"dimensions must be positive, got {dims}", lineno)
    return dims


def read_coo(path):
    """Read an :class:`ObservationSet` from a COO file."""
    with open(path, encoding="utf-8") as fh:
        lines = _content_lines(fh)
        try:
            lineno, header = next(lines)
        except StopIteration:
            raise ParseError("empty file: missing dimension header") from None
        dims = _parse_header(lineno, header)
        seen = {}
        idx, vals = [], []
        for lineno, line in lines:
            parts = line.split()
            if len(parts) != 4:
                raise ParseError(f"expected 'i1 i2 i3 value', got {line!r}", lineno)
            try:
                triple = tuple(int(p) for p in parts[:3])
                value = float(parts[3])
            except ValueError:
                raise ParseError(f"cannot parse entry {line!r}", lineno) from None
            if not np.isfinite(value):
                raise ParseError(f"non-finite value in {line!r}", lineno)
            for axis, (i, d) in enumerate(zip(triple, dims), start=1):
                if not 1 <= i <= d:
                    raise ValidationError(
                        f"line {lineno}: index {i} out of range 1..{d} on mode {axis} in entry {triple}"
                    )
            if triple in seen:
                raise ValidationError(f"line {lineno}: duplicate entry {triple} (first on line {seen[triple]})")
            seen[triple] = lineno
            idx.append(triple)
            vals.append(value)
    return ObservationSet(dims, np.asarray(idx, dtype=np.int64).reshape(-1, 3), np.asarray(vals))


def write_coo(path, omega, comment=None):
    """Write ``omega`` (which must carry values) in COO format."""
    if omega.values is None:
        raise ValidationError("observation set carries no values")
    with open(path, "w", encoding="utf-8") as fh:
        if comment:
            for line in str(comment).splitlines():
                fh.write(f"# {line}\n")
        fh.write("{} {} {}\n".format(*omega.dims))
        for i, j, k, v in omega.entries():
            fh.write(f"{i} {j} {k} {_fmt(v)}\n")


def read_dense(path):
    """Read a dense tensor file."""
    with open(path, encoding="utf-8") as fh:
        lines = _content_lines(fh)
        try:
            lineno, header = next(lines)
        except StopIteration:
            raise ParseError("empty file: missing dimension header") from None
        dims = _parse_header(lineno, header)
        tokens = []
        for lineno, line in lines:
            for tok in line.split():
                try:
                    tokens.append(float(tok))
                except ValueError:
                    raise ParseError(f"cannot parse value {tok!r}", lineno) from None
    expected = int(np.prod(dims))
    if len(tokens) != expected:
        raise ParseError(f"expected {expected} values, found {len(tokens)}")
    values = np.asarray(tokens)
    if not np.all(np.isfinite(values)):
        raise ParseError("non-finite value in dense tensor file")
    return values.reshape(dims, order="F")


def write_dense(path, t):
    """Write tensor ``t`` in dense format, one value per line."""
    t = as_tensor3(t)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("{} {} {}\n".format(*t.shape))
        fh.write("\n".join(_fmt(v) for v in t.ravel(order="F")))
        fh.write("\n")


def _row(rec):
    return [rec.get(f, "") for f in RESULT_FIELDS]


def write_results_stream(fh, records):
    """Write a header and result rows to an open text stream."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(RESULT_FIELDS)
    for rec in records:
        writer.writerow(_row(rec))


def write_results(path, records):
    """Write result rows (mappings keyed by :data:`RESULT_FIELDS`) with a header."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        write_results_stream(fh, records)


def append_results(path, records):
    """Append rows, writing the header first if the file is new or empty."""
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if new:
            writer.writerow(RESULT_FIELDS)
        for rec in records:
            writer.writerow(_row(rec))


def read_results(path):
    """Read a results CSV into a list of dicts (values stay strings)."""
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
