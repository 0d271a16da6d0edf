"""The kernel matrix and the window calculus of the block inverses.

The kernel matrix is the m x 3m concatenation

    T = ( -D_U D_L^-1  |  I_m  |  -D_L D_U^-1 )

It annihilates the tall stack D_l = (D_L; D_U), i.e. T K = 0 for the
3m x 2m stack K, and every closed-form window inverse flows through it:

* ``a_window(inst, i)`` / ``b_window(inst, i)`` are the m consecutive
  columns of A_B / B_B starting at column i (the last m rows of D^-1
  and S^-1 respectively);
* ``a_inv(inst, j)`` = T_{m-j+2} D_r and ``b_inv(inst, j)`` =
  T_{m-j+2} N invert those windows in closed form;
* ``h_matrix(inst)`` = T M collects all B-window inverses at once:
  its i-th window equals b_inv(inst, m-i+2).

All index arithmetic is 1-based to match the subscripts of the window
definitions; the mirror map i -> m - i + 2 is centralized in
``mirror_index``. The kernel matrix and the window inverses are cached
per instance, since every identity check reuses them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import builders
from .numeric import SingularInstanceError
from .structmat import densify, identity, invert_lower, invert_upper, window


@dataclass(frozen=True, eq=False)
class KernelT:
    """The kernel matrix: m x 3m, middle m columns the identity."""

    m: int
    body: np.ndarray


def mirror_index(m: int, i: int) -> int:
    """The mirror i -> m - i + 2, an involution of the window range 1..m+1.

    It pairs a window with the kernel window that inverts it: the block
    t_block(T, m-i+2, i) is the identity for every i.
    """
    if not 1 <= i <= m + 1:
        raise IndexError(f"window index {i} out of range 1..{m + 1}")
    return m - i + 2


def _check_window_index(m: int, i: int) -> None:
    if not 1 <= i <= m + 1:
        raise IndexError(f"window index {i} out of range 1..{m + 1}")


@lru_cache(maxsize=256)
def build_t(inst: builders.Instance) -> KernelT:
    """Assemble the kernel matrix for an instance.

    Requires d1 != 0 and d_{m+1} != 0 so that both triangular Toeplitz
    inverses exist.
    """
    if inst.d[0] == 0:
        raise SingularInstanceError("d1 is zero, D_L is singular")
    if inst.d[-1] == 0:
        raise SingularInstanceError("d[m+1] is zero, D_U is singular")
    m = inst.m
    dl_inv = densify(invert_lower(builders.d_lower(inst)))
    du_inv = densify(invert_upper(builders.d_upper(inst)))
    left = -np.dot(densify(builders.d_upper(inst)), dl_inv)
    right = -np.dot(densify(builders.d_lower(inst)), du_inv)
    body = np.concatenate([left, identity(m, inst.field), right], axis=1)
    body.flags.writeable = False
    return KernelT(m, body)


def t_window(t: KernelT, i: int) -> np.ndarray:
    """T_i: columns i .. i+2m-1 of the kernel matrix, i in 1..m+1."""
    _check_window_index(t.m, i)
    return window(t.body, i, 2 * t.m)


def t_block(t: KernelT, i: int, j: int) -> np.ndarray:
    """T_{ij}: the j-th m-column window of T_i, i.e. columns i+j-1 .. i+j+m-2."""
    _check_window_index(t.m, i)
    _check_window_index(t.m, j)
    return window(t.body, i + j - 1, t.m)


def a_window(inst: builders.Instance, i: int) -> np.ndarray:
    """A_i: the i-th m x m column window of A_B."""
    _check_window_index(inst.m, i)
    return window(builders.a_bottom(inst), i, inst.m)


def b_window(inst: builders.Instance, i: int) -> np.ndarray:
    """B_i: the i-th m x m column window of B_B."""
    _check_window_index(inst.m, i)
    return window(builders.b_bottom(inst), i, inst.m)


@lru_cache(maxsize=1024)
def a_inv(inst: builders.Instance, j: int) -> np.ndarray:
    """Closed-form inverse of A_j: the product T_{m-j+2} D_r."""
    t = build_t(inst)
    out = np.dot(t_window(t, mirror_index(inst.m, j)), builders.build_dr(inst))
    out.flags.writeable = False
    return out


@lru_cache(maxsize=1024)
def b_inv(inst: builders.Instance, j: int) -> np.ndarray:
    """Closed-form inverse of B_j: the product T_{m-j+2} N."""
    t = build_t(inst)
    out = np.dot(t_window(t, mirror_index(inst.m, j)), builders.build_n(inst))
    out.flags.writeable = False
    return out


@lru_cache(maxsize=256)
def h_matrix(inst: builders.Instance) -> np.ndarray:
    """H = T M, the m x 2m matrix whose i-th window is b_inv(inst, m-i+2)."""
    out = np.dot(build_t(inst).body, builders.build_m(inst))
    out.flags.writeable = False
    return out


def h_window(h: np.ndarray, i: int) -> np.ndarray:
    """H_i: the i-th m x m column window of an m x 2m matrix H."""
    m = h.shape[0]
    if h.shape[1] != 2 * m:
        raise ValueError(f"expected an m x 2m matrix, got {h.shape}")
    _check_window_index(m, i)
    return window(h, i, m)
