"""Dense brute-force linear algebra used as ground truth.

Gauss-Jordan inversion and an elimination determinant, written against
plain numpy arrays with no knowledge of any structured representation.
This module must stay independent of the structured construction code:
it imports only the scalar field layer, so every comparison between a
closed-form inverse and ``dense_inverse`` crosses two disjoint code
paths.

Exact arrays pivot on the first nonzero entry of the working column;
float arrays use partial pivoting by magnitude with a relative
singularity threshold (floats cannot certify invertibility, so the
exact field remains the authority on singularity).
"""

from __future__ import annotations

import numpy as np

from .numeric import SingularMatrixError, field_of

# A float pivot counts as zero below this multiple of the largest
# absolute entry seen in the working column.
PIVOT_RTOL = 1e-12


def _pivot_row(work: np.ndarray, k: int, exact: bool):
    """Row index >= k to pivot on, or None if the column is spent."""
    col = work[:, k]
    if exact:
        for i in range(k, work.shape[0]):
            if col[i] != 0:
                return i
        return None
    tail = np.abs(col[k:])
    i = k + int(np.argmax(tail))
    threshold = PIVOT_RTOL * max(float(np.abs(col).max()), 1.0)
    if abs(col[i]) <= threshold:
        return None
    return i


def dense_inverse(x: np.ndarray) -> np.ndarray:
    """Inverse by Gauss-Jordan elimination on the augmented matrix [x | I]."""
    rows, cols = x.shape
    if rows != cols:
        raise SingularMatrixError(f"cannot invert non-square {rows}x{cols} matrix")
    field = field_of(x)
    n = rows
    work = np.concatenate([x, field.eye(n)], axis=1)
    for k in range(n):
        p = _pivot_row(work, k, field.exact)
        if p is None:
            raise SingularMatrixError(f"singular at column {k + 1}")
        if p != k:
            work[[k, p]] = work[[p, k]]
        work[k] = work[k] / work[k, k]
        factors = work[:, k].copy()
        factors[k] = field.zero
        work = work - np.outer(factors, work[k])
    return work[:, n:]


def dense_det(x: np.ndarray):
    """Determinant by triangularizing elimination with sign tracking.

    Returns the field's zero for singular input; never raises.
    """
    rows, cols = x.shape
    if rows != cols:
        raise SingularMatrixError(f"determinant needs a square matrix, got {rows}x{cols}")
    field = field_of(x)
    n = rows
    work = np.array(x, copy=True)
    sign = 1
    for k in range(n):
        p = _pivot_row(work, k, field.exact)
        if p is None:
            return field.zero
        if p != k:
            work[[k, p]] = work[[p, k]]
            sign = -sign
        pivot = work[k, k]
        for i in range(k + 1, n):
            if work[i, k] != 0:
                work[i, k:] = work[i, k:] - (work[i, k] / pivot) * work[k, k:]
    det = field.one
    for k in range(n):
        det = det * work[k, k]
    return sign * det
