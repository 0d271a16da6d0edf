"""Coefficient instances and every block matrix built from them.

An :class:`Instance` is two coefficient vectors d[1..m+1] and n[1..m+1].
From it we assemble the Sylvester block matrix S, the block lower
triangular D, the tall stacks D_l, D_r, N, K, M, the Bezoutian matrix,
and the two structured inverses:

* ``invert_s_structured`` realizes S^-1 through the Bezoutian block
  formula [[N_U Bz, -N_L Bz], [-D_U Bz, D_L Bz]] with
  Bz = (D_L N_U - N_L D_U)^-1;
* ``invert_d_structured`` realizes D^-1 through the block triangular
  formula [[P, 0], [-P D_U P, P]] with P = D_L^-1 from the O(m^2)
  Toeplitz recursion.

Both are cross-checked against ``oracle.dense_inverse`` in the test
suite and the verification reports.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import oracle
from .numeric import (
    DEFAULT_TOL,
    RATIONAL,
    EqPolicy,
    Field,
    SingularInstanceError,
    SingularMatrixError,
    matrices_equal,
)
from .structmat import (
    LowerToeplitz,
    UpperToeplitz,
    densify,
    invert_lower,
    lower_from_coeffs,
    upper_from_coeffs,
    window,
    zeros,
)

# Ad hoc float singularity rule for the validity predicate; the exact
# field is the authority, floats only get a scale-aware cutoff.
FLOAT_SINGULAR_RTOL = 1e-12


@dataclass(frozen=True)
class Instance:
    """Coefficient data d[1..m+1], n[1..m+1] over a scalar field."""

    d: tuple
    n: tuple
    field: Field = RATIONAL

    def __post_init__(self):
        if len(self.d) < 2:
            raise ValueError("need m >= 1, i.e. at least two d coefficients")
        if len(self.d) != len(self.n):
            raise ValueError(
                f"coefficient vectors differ in length: {len(self.d)} vs {len(self.n)}"
            )

    @property
    def m(self) -> int:
        return len(self.d) - 1

    @classmethod
    def from_coeffs(cls, d, n, field: Field = RATIONAL) -> "Instance":
        """Coerce arbitrary coefficient sequences into field elements."""
        return cls(
            tuple(field.element(v) for v in d),
            tuple(field.element(v) for v in n),
            field,
        )


class FailureReason(enum.Enum):
    D_FIRST_ZERO = "d1 is zero"
    D_LAST_ZERO = "d[m+1] is zero"
    SINGULAR_BEZOUTIAN = "Bezoutian matrix is singular"
    ZERO_D_ENTRY = "a d coefficient is zero"
    ZERO_N_ENTRY = "an n coefficient is zero"


@dataclass(frozen=True)
class Validity:
    """Outcome of the instance validity predicate.

    ``strict_ok`` additionally demands every coefficient nonzero;
    ``relaxed_ok`` only the invertibility of D_L, D_U and the Bezoutian.
    ``failure_reason`` explains the requested mode's verdict (None when
    that mode passed).
    """

    strict_ok: bool
    relaxed_ok: bool
    failure_reason: FailureReason | None

    def ok(self, mode: str) -> bool:
        return self.strict_ok if mode == "strict" else self.relaxed_ok


def d_lower(inst: Instance) -> LowerToeplitz:
    """D_L: lower triangular Toeplitz on d1..dm."""
    return lower_from_coeffs(inst.d[: inst.m], inst.field)


def d_upper(inst: Instance) -> UpperToeplitz:
    """D_U: upper triangular Toeplitz on d2..d_{m+1} (diagonal d_{m+1})."""
    return upper_from_coeffs(inst.d[1:], inst.field)


def n_lower(inst: Instance) -> LowerToeplitz:
    return lower_from_coeffs(inst.n[: inst.m], inst.field)


def n_upper(inst: Instance) -> UpperToeplitz:
    return upper_from_coeffs(inst.n[1:], inst.field)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def build_s(inst: Instance) -> np.ndarray:
    """Sylvester block matrix S = [[D_L, N_L], [D_U, N_U]], 2m x 2m."""
    return np.block(
        [
            [densify(d_lower(inst)), densify(n_lower(inst))],
            [densify(d_upper(inst)), densify(n_upper(inst))],
        ]
    )


def build_d(inst: Instance) -> np.ndarray:
    """Block lower triangular D = [[D_L, 0], [D_U, D_L]], 2m x 2m."""
    m = inst.m
    dl = densify(d_lower(inst))
    return np.block([[dl, zeros(m, m, inst.field)], [densify(d_upper(inst)), dl]])


def build_dl(inst: Instance) -> np.ndarray:
    """Tall stack D_l = (D_L; D_U), 2m x m."""
    return np.concatenate([densify(d_lower(inst)), densify(d_upper(inst))], axis=0)


def build_dr(inst: Instance) -> np.ndarray:
    """Tall stack D_r = (0; D_L), 2m x m."""
    m = inst.m
    return np.concatenate([zeros(m, m, inst.field), densify(d_lower(inst))], axis=0)


def build_n(inst: Instance) -> np.ndarray:
    """Tall stack N = (N_L; N_U), 2m x m."""
    return np.concatenate([densify(n_lower(inst)), densify(n_upper(inst))], axis=0)


def build_k(inst: Instance) -> np.ndarray:
    """3m x 2m stack K = [[D_L, 0], [D_U, D_L], [0, D_U]].

    Its m-column window starting at column i equals D_l padded with
    i-1 zero rows above and m-i+1 below.
    """
    m = inst.m
    dl = densify(d_lower(inst))
    du = densify(d_upper(inst))
    z = zeros(m, m, inst.field)
    return np.block([[dl, z], [du, dl], [z, du]])


def build_m(inst: Instance) -> np.ndarray:
    """3m x 2m stack M = [[N_L, 0], [N_U, N_L], [0, N_U]]."""
    m = inst.m
    nl = densify(n_lower(inst))
    nu = densify(n_upper(inst))
    z = zeros(m, m, inst.field)
    return np.block([[nl, z], [nu, nl], [z, nu]])


def _default_policy(field: Field) -> EqPolicy:
    return EqPolicy.exact() if field.exact else EqPolicy.approx(DEFAULT_TOL)


@lru_cache(maxsize=256)
def bezout_matrix(inst: Instance) -> np.ndarray:
    """Bezoutian matrix D_L N_U - N_L D_U (equivalently N_U D_L - D_U N_L).

    Both expressions are evaluated and checked against each other; a
    mismatch would be an implementation bug, not bad input data.
    """
    dl = densify(d_lower(inst))
    du = densify(d_upper(inst))
    nl = densify(n_lower(inst))
    nu = densify(n_upper(inst))
    first = np.dot(dl, nu) - np.dot(nl, du)
    second = np.dot(nu, dl) - np.dot(du, nl)
    check = matrices_equal(first, second, _default_policy(inst.field))
    if not check.equal:
        raise AssertionError(
            f"Bezoutian forms disagree (residual {check.residual}); implementation bug"
        )
    return _freeze(first)


@lru_cache(maxsize=256)
def invert_s_structured(inst: Instance) -> np.ndarray:
    """S^-1 via the Bezoutian block formula; exact in the rational field."""
    try:
        bz = oracle.dense_inverse(bezout_matrix(inst))
    except SingularMatrixError as exc:
        raise SingularInstanceError(f"Bezoutian matrix is singular: {exc}") from exc
    dl = densify(d_lower(inst))
    du = densify(d_upper(inst))
    nl = densify(n_lower(inst))
    nu = densify(n_upper(inst))
    return _freeze(
        np.block(
            [
                [np.dot(nu, bz), -np.dot(nl, bz)],
                [-np.dot(du, bz), np.dot(dl, bz)],
            ]
        )
    )


@lru_cache(maxsize=256)
def invert_d_structured(inst: Instance) -> np.ndarray:
    """D^-1 via the block triangular formula [[P, 0], [-P D_U P, P]]."""
    if inst.d[0] == 0:
        raise SingularInstanceError("d1 is zero, D is singular")
    m = inst.m
    p = densify(invert_lower(d_lower(inst)))
    bottom_left = -np.dot(p, np.dot(densify(d_upper(inst)), p))
    return _freeze(np.block([[p, zeros(m, m, inst.field)], [bottom_left, p]]))


def _is_det_zero(det, field: Field, scale: float) -> bool:
    if field.exact:
        return det == 0
    return abs(det) <= FLOAT_SINGULAR_RTOL * max(1.0, scale)


def validate(inst: Instance, mode: str = "strict") -> Validity:
    """Evaluate the instance validity predicate.

    Relaxed validity: d1 != 0, d_{m+1} != 0 and the Bezoutian matrix is
    nonsingular (exactly the hypotheses that make D_L, D_U, D, S
    invertible and the kernel matrix well defined). Strict validity
    additionally requires every coefficient nonzero.
    """
    if mode not in ("strict", "relaxed"):
        raise ValueError(f"unknown validation mode {mode!r}")
    relaxed_reason = None
    if inst.d[0] == 0:
        relaxed_reason = FailureReason.D_FIRST_ZERO
    elif inst.d[-1] == 0:
        relaxed_reason = FailureReason.D_LAST_ZERO
    else:
        det = oracle.dense_det(bezout_matrix(inst))
        scale = 0.0 if inst.field.exact else float(np.abs(bezout_matrix(inst)).max())
        if _is_det_zero(det, inst.field, scale):
            relaxed_reason = FailureReason.SINGULAR_BEZOUTIAN

    strict_reason = relaxed_reason
    if strict_reason is None:
        if any(v == 0 for v in inst.d):
            strict_reason = FailureReason.ZERO_D_ENTRY
        elif any(v == 0 for v in inst.n):
            strict_reason = FailureReason.ZERO_N_ENTRY

    reason = strict_reason if mode == "strict" else relaxed_reason
    return Validity(strict_reason is None, relaxed_reason is None, reason)


def a_bottom(inst: Instance) -> np.ndarray:
    """A_B: the last m rows of D^-1, the source of the A windows."""
    return invert_d_structured(inst)[inst.m :, :]


def b_bottom(inst: Instance) -> np.ndarray:
    """B_B: the last m rows of S^-1, the source of the B windows."""
    return invert_s_structured(inst)[inst.m :, :]


def window_of_bottom(bottom: np.ndarray, i: int) -> np.ndarray:
    """The i-th m x m column window of an m x 2m bottom block, i in 1..m+1."""
    m = bottom.shape[0]
    if not 1 <= i <= m + 1:
        raise IndexError(f"window index {i} out of range 1..{m + 1}")
    return window(bottom, i, m)
