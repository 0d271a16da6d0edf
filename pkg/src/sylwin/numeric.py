"""Scalar fields and matrix equality policies.

Two interchangeable scalar realizations back every matrix in this
package: exact rationals (arbitrary precision, the gold standard for
all identity checks) and binary64 floats (the benchmark path).
Matrices over either field are plain numpy arrays; the rational field
uses ``dtype=object`` with :class:`gmpy2.mpq` entries, which are always
kept in lowest terms with a positive denominator.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

DEFAULT_TOL = 1e-9

# Interchange grammar: optional minus sign, digits, optional "/" digits.
# The denominator carries no sign.
_RATIONAL_TEXT = re.compile(r"-?[0-9]+(?:/[0-9]+)?\Z")


class DimensionError(ValueError):
    """Operand shapes do not fit the requested operation."""


class SingularMatrixError(ArithmeticError):
    """A matrix required to be invertible is singular."""


class SingularInstanceError(ArithmeticError):
    """Coefficient data violates the invertibility hypotheses."""


def rat(p, q=1):
    """Canonical rational p/q: lowest terms, positive denominator.

    Raises ZeroDivisionError for q == 0.
    """
    return mpq(p, q)


class Field:
    """A scalar field: element coercion, parsing, and array dtype."""

    name: str
    exact: bool
    dtype: object

    def element(self, value):
        raise NotImplementedError

    @property
    def zero(self):
        return self.element(0)

    @property
    def one(self):
        return self.element(1)

    def parse(self, text: str):
        """Read one scalar from the interchange text form (e.g. "-3/7")."""
        if not isinstance(text, str) or not _RATIONAL_TEXT.match(text):
            raise ValueError(f"not a rational literal: {text!r}")
        return self.element(mpq(text))

    def format(self, value) -> str:
        return str(value)

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if rows < 1 or cols < 1:
            raise DimensionError(f"matrix shape must be positive, got {rows}x{cols}")
        out = np.empty((rows, cols), dtype=self.dtype)
        out[:] = self.zero
        return out

    def eye(self, m: int) -> np.ndarray:
        out = self.zeros(m, m)
        for i in range(m):
            out[i, i] = self.one
        return out

    def __repr__(self):
        return f"<field {self.name}>"


class _RationalField(Field):
    name = "rational"
    exact = True
    dtype = object

    def element(self, value):
        if isinstance(value, float):
            # Floats are not part of the exact hypothesis class; force the
            # caller to decide how to rationalize them.
            raise TypeError("refusing implicit float -> rational conversion")
        return mpq(value)


class _Float64Field(Field):
    name = "float64"
    exact = False
    dtype = np.float64

    def element(self, value):
        return float(value)


RATIONAL = _RationalField()
FLOAT64 = _Float64Field()
FIELDS = {f.name: f for f in (RATIONAL, FLOAT64)}


def field_of(matrix: np.ndarray) -> Field:
    """Infer the scalar field from an array's dtype."""
    return RATIONAL if matrix.dtype == object else FLOAT64


@dataclass(frozen=True)
class EqPolicy:
    """How two matrices are declared equal.

    ``exact`` compares entrywise and ignores ``tol``; ``approx`` accepts
    X ~ Y when ||X - Y||_F <= tol * max(1, ||X||_F, ||Y||_F).
    """

    mode: str
    tol: float = 0.0

    def __post_init__(self):
        if self.mode not in ("exact", "approx"):
            raise ValueError(f"unknown equality mode {self.mode!r}")
        if self.mode == "approx" and not self.tol > 0:
            raise ValueError("approx mode requires tol > 0")

    @classmethod
    def exact(cls) -> "EqPolicy":
        return cls("exact")

    @classmethod
    def approx(cls, tol: float = DEFAULT_TOL) -> "EqPolicy":
        return cls("approx", tol)


@dataclass(frozen=True)
class MatchResult:
    """Verdict of a matrix comparison plus the measured residual.

    In exact mode the residual is the largest absolute entry of X - Y
    (an exact scalar, 0 on success); in approx mode it is the relative
    Frobenius residual as a float.
    """

    equal: bool
    residual: object

    def __bool__(self) -> bool:
        return self.equal


def frobenius(matrix: np.ndarray) -> float:
    """Frobenius norm, evaluated in binary64 regardless of field."""
    if matrix.dtype == object:
        acc = math.fsum(float(v) * float(v) for v in matrix.flat)
        return math.sqrt(acc)
    return float(np.linalg.norm(matrix))


def matrices_equal(x: np.ndarray, y: np.ndarray, policy: EqPolicy) -> MatchResult:
    """Compare two same-shape matrices under the given policy."""
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch: {x.shape} vs {y.shape}")
    diff = x - y
    if policy.mode == "exact":
        residual = max((abs(v) for v in diff.flat), default=mpq(0))
        if not isinstance(residual, float):
            residual = mpq(residual)
        return MatchResult(residual == 0, residual)
    scale = max(1.0, frobenius(x), frobenius(y))
    residual = frobenius(diff) / scale
    return MatchResult(residual <= policy.tol, residual)
