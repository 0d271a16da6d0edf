"""Triangular Toeplitz representations and dense matrix helpers.

A lower (upper) triangular Toeplitz matrix is determined by its first
column (row); the compact types here store exactly that. Inversion of
the compact forms runs in O(m^2) field operations via the forward
recursion, and products of two compact forms with the same orientation
are truncated coefficient convolutions, again O(m^2). Everything else
falls back to dense numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numeric import RATIONAL, DimensionError, Field, SingularMatrixError


@dataclass(frozen=True, eq=False)
class LowerToeplitz:
    """Lower triangular Toeplitz matrix: entry(i, j) = col[i - j] for i >= j."""

    col: tuple
    field: Field

    @property
    def m(self) -> int:
        return len(self.col)


@dataclass(frozen=True, eq=False)
class UpperToeplitz:
    """Upper triangular Toeplitz matrix: entry(i, j) = row[j - i] for j >= i."""

    row: tuple
    field: Field

    @property
    def m(self) -> int:
        return len(self.row)


def lower_from_coeffs(coeffs, field: Field = RATIONAL) -> LowerToeplitz:
    """Lower triangular Toeplitz with first column (c1, ..., cm)."""
    col = tuple(field.element(c) for c in coeffs)
    if not col:
        raise DimensionError("need at least one coefficient")
    return LowerToeplitz(col, field)


def upper_from_coeffs(coeffs, field: Field = RATIONAL) -> UpperToeplitz:
    """Upper triangular Toeplitz from the coefficient run (c2, ..., c_{m+1}).

    The first row is the reversed run (c_{m+1}, ..., c2), so the diagonal
    carries the last coefficient supplied.
    """
    run = tuple(field.element(c) for c in coeffs)
    if not run:
        raise DimensionError("need at least one coefficient")
    return UpperToeplitz(tuple(reversed(run)), field)


def densify(t) -> np.ndarray:
    """Expand a compact triangular Toeplitz form to a dense m x m array."""
    m = t.m
    out = t.field.zeros(m, m)
    if isinstance(t, LowerToeplitz):
        for j in range(m):
            for i in range(j, m):
                out[i, j] = t.col[i - j]
    elif isinstance(t, UpperToeplitz):
        for i in range(m):
            for j in range(i, m):
                out[i, j] = t.row[j - i]
    else:
        raise TypeError(f"not a compact Toeplitz form: {type(t).__name__}")
    return out


def invert_lower(t: LowerToeplitz) -> LowerToeplitz:
    """Invert a lower triangular Toeplitz matrix; the inverse is again one.

    Forward recursion on the first column g: g1 = 1/c1 and
    g_k = -(sum_{j=2..k} c_j * g_{k-j+1}) / c1. Cost O(m^2).
    """
    c = t.col
    if c[0] == 0:
        raise SingularMatrixError("zero diagonal in triangular Toeplitz matrix")
    g = [t.field.one / c[0]]
    for k in range(1, t.m):
        acc = sum(c[j] * g[k - j] for j in range(1, k + 1))
        g.append(-acc / c[0])
    return LowerToeplitz(tuple(g), t.field)


def invert_upper(t: UpperToeplitz) -> UpperToeplitz:
    """Invert an upper triangular Toeplitz matrix via reversal symmetry.

    With J the anti-diagonal permutation, J U J is lower Toeplitz with
    first column equal to U's first row, and U^-1 = J (J U J)^-1 J.
    """
    mirrored = invert_lower(LowerToeplitz(t.row, t.field))
    return UpperToeplitz(mirrored.col, t.field)


def lower_mul(a: LowerToeplitz, b: LowerToeplitz) -> LowerToeplitz:
    """Product of two lower triangular Toeplitz matrices, kept compact.

    The product is again lower Toeplitz; its first column is the
    coefficient convolution truncated to length m.
    """
    if a.m != b.m:
        raise DimensionError(f"order mismatch: {a.m} vs {b.m}")
    col = tuple(
        sum(a.col[j] * b.col[k - j] for j in range(k + 1)) for k in range(a.m)
    )
    return LowerToeplitz(col, a.field)


def upper_mul(a: UpperToeplitz, b: UpperToeplitz) -> UpperToeplitz:
    if a.m != b.m:
        raise DimensionError(f"order mismatch: {a.m} vs {b.m}")
    row = tuple(
        sum(a.row[j] * b.row[k - j] for j in range(k + 1)) for k in range(a.m)
    )
    return UpperToeplitz(row, a.field)


def identity(m: int, field: Field = RATIONAL) -> np.ndarray:
    return field.eye(m)


def zeros(rows: int, cols: int, field: Field = RATIONAL) -> np.ndarray:
    return field.zeros(rows, cols)


def mat_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if x.shape[1] != y.shape[0]:
        raise DimensionError(f"inner dimensions differ: {x.shape} @ {y.shape}")
    return np.dot(x, y)


def mat_sub(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch: {x.shape} vs {y.shape}")
    return x - y


def window(x: np.ndarray, start: int, width: int) -> np.ndarray:
    """Columns start .. start+width-1 of x (1-based), all rows."""
    cols = x.shape[1]
    if start < 1 or width < 1 or start + width - 1 > cols:
        raise DimensionError(
            f"window [{start}, {start + width - 1}] out of range for {cols} columns"
        )
    return x[:, start - 1 : start - 1 + width]


def as_matrix(rows, field: Field = RATIONAL) -> np.ndarray:
    """Build a dense matrix from nested sequences of field-coercible values."""
    data = [[field.element(v) for v in row] for row in rows]
    if not data or not data[0]:
        raise DimensionError("matrix must have at least one row and column")
    if any(len(r) != len(data[0]) for r in data):
        raise DimensionError("ragged rows")
    out = field.zeros(len(data), len(data[0]))
    for i, row in enumerate(data):
        for j, v in enumerate(row):
            out[i, j] = v
    return out
