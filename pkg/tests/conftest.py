"""Shared fixtures: the two worked instances and seeded instance streams."""

import pytest

from sylwin import Instance
from sylwin.builders import validate
from sylwin.cli import SplitMix64, draw_instance


@pytest.fixture
def inst_m1():
    """Order-1 worked example: d = (1, 2), n = (1, 3)."""
    return Instance.from_coeffs([1, 2], [1, 3])


@pytest.fixture
def inst_m2():
    """Order-2 worked example: d = (1, 1, 1), n = (1, 2, 3)."""
    return Instance.from_coeffs([1, 1, 1], [1, 2, 3])


def seeded_instances(seed, m, count, mode="strict", bound=9):
    """Deterministic list of valid rational instances."""
    master = SplitMix64(seed)
    subs = [master.next_u64() for _ in range(count)]
    return [draw_instance(SplitMix64(s), m, bound, mode) for s in subs]


def well_conditioned_instance(rng, m, field):
    """Instance whose float64 identity residuals stay tiny.

    Dominant first and last coefficients (|d1| = |d_{m+1}| = |n1| =
    |n_{m+1}| = 9, interiors +-1) keep both triangular Toeplitz
    inverses bounded, and the sign pattern keeps the Bezoutian diagonal
    away from cancellation. Coefficients stay in [-9, 9] \\ {0}.
    """
    while True:
        s1 = 1 if rng.below(2) else -1
        s2 = 1 if rng.below(2) else -1
        s3 = 1 if rng.below(2) else -1
        s4 = -s1 * s2 * s3
        d = [9 * s1] + [1 if rng.below(2) else -1 for _ in range(m - 1)] + [9 * s2]
        n = [9 * s3] + [1 if rng.below(2) else -1 for _ in range(m - 1)] + [9 * s4]
        exact_twin = Instance.from_coeffs(d, n)
        if validate(exact_twin, "strict").strict_ok:
            return Instance.from_coeffs(d, n, field)
