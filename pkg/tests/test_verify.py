import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import seeded_instances, well_conditioned_instance
from sylwin import verify
from sylwin.builders import FailureReason, Instance
from sylwin.cli import SplitMix64
from sylwin.kernel import a_window, b_inv, b_window
from sylwin.numeric import FLOAT64, EqPolicy, SingularInstanceError, matrices_equal, rat
from sylwin.structmat import as_matrix, mat_mul

EXACT = EqPolicy.exact()

EXPECTED_ORDER = (
    "structured_inverse_s",
    "structured_inverse_d",
    "window_inverse_oracle",
    "kernel_annihilation",
    "product_symmetry",
    "window_quotients",
    "quotient_commutation",
    "window_commutation",
    "shift_invariance",
    "ratio_invariance",
    "h_windows",
    "window_times_h",
)

ALL_CHECKS = (
    verify.check_structured_inverse_s,
    verify.check_structured_inverse_d,
    verify.check_window_inverse_oracle,
    verify.check_kernel_annihilation,
    verify.check_product_symmetry,
    verify.check_window_quotients,
    verify.check_quotient_commutation,
    verify.check_window_commutation,
    verify.check_shift_invariance,
    verify.check_ratio_invariance,
    verify.check_h_windows,
    verify.check_window_times_h,
)


def eq(x, y):
    return matrices_equal(x, y, EXACT).equal


@pytest.mark.parametrize("check", ALL_CHECKS)
def test_each_check_passes_on_worked_examples(check, inst_m1, inst_m2):
    for inst in (inst_m1, inst_m2):
        record = check(inst)
        assert record.passed
        assert record.max_residual == 0
        assert record.counterexample is None


def test_product_symmetry_values(inst_m1, inst_m2):
    # order 1: A1 B2 = -2 = A2 B1
    assert eq(
        mat_mul(a_window(inst_m1, 1), b_window(inst_m1, 2)), as_matrix([[-2]])
    )
    # order 2: A1 B2 = (1/3) [[2, -1], [-1, 2]] = A2 B1
    expected = as_matrix([["2/3", "-1/3"], ["-1/3", "2/3"]])
    assert eq(mat_mul(a_window(inst_m2, 1), b_window(inst_m2, 2)), expected)
    assert eq(mat_mul(a_window(inst_m2, 2), b_window(inst_m2, 1)), expected)


def test_quotient_value(inst_m2):
    # B1^-1 B2 equals the kernel block at (3, 2)
    assert eq(
        mat_mul(b_inv(inst_m2, 1), b_window(inst_m2, 2)),
        as_matrix([[0, -1], [1, -1]]),
    )


def test_window_product_values(inst_m2):
    b1b2 = mat_mul(b_window(inst_m2, 1), b_window(inst_m2, 2))
    assert eq(b1b2, as_matrix([["1/3", "-1/3"], ["1/3", "0"]]))
    assert eq(b1b2, mat_mul(b_window(inst_m2, 2), b_window(inst_m2, 1)))
    b1b3 = mat_mul(b_window(inst_m2, 1), b_window(inst_m2, 3))
    b2b2 = mat_mul(b_window(inst_m2, 2), b_window(inst_m2, 2))
    assert eq(b1b3, b2b2)


def test_ratio_invariance_value(inst_m1):
    record = verify.check_ratio_invariance(inst_m1)
    assert record.passed
    assert eq(
        mat_mul(a_window(inst_m1, 1), b_inv(inst_m1, 1)), as_matrix([[1]])
    )


def test_run_all_report_shape(inst_m2):
    report = verify.run_all(inst_m2)
    assert report.valid and report.passed
    assert tuple(r.name for r in report.records) == EXPECTED_ORDER
    assert all(r.max_residual == 0 for r in report.records)
    assert report.m == 2 and report.field_name == "rational"
    assert report.tol is None


def test_run_all_rejects_invalid_instance():
    report = verify.run_all(Instance.from_coeffs([1, 2], [2, 4]))
    assert not report.valid
    assert report.failure_reason is FailureReason.SINGULAR_BEZOUTIAN
    assert report.records == ()
    assert not report.passed


def test_run_all_strict_gate_vs_relaxed():
    # relaxed-valid instance with an interior zero: the identity suite
    # still passes in relaxed mode (observed behaviour, not a claim)
    inst = Instance.from_coeffs([1, 0, 1], [1, 1, 2])
    strict = verify.run_all(inst)
    assert not strict.valid
    relaxed = verify.run_all(inst, mode="relaxed")
    assert relaxed.valid and relaxed.passed


def test_run_all_float_field():
    inst = well_conditioned_instance(SplitMix64(11), 8, FLOAT64)
    report = verify.run_all(inst, tol=1e-9)
    assert report.valid and report.passed
    assert report.tol == 1e-9
    assert all(r.max_residual <= 1e-9 for r in report.records)


def test_run_all_seed_is_carried(inst_m1):
    assert verify.run_all(inst_m1, seed=77).seed == 77


# --- n-independence -----------------------------------------------------------


def test_n_independence_order_one():
    record = verify.check_n_independence([1, 2], [1, 3], [2, 5])
    assert record.passed and record.max_residual == 0


def test_n_independence_identical_vectors():
    record = verify.check_n_independence([1, 2], [1, 3], [1, 3])
    assert record.passed


def test_n_independence_order_two():
    record = verify.check_n_independence([1, 1, 1], [1, 2, 3], [3, 1, 2])
    assert record.passed and record.max_residual == 0


def test_n_independence_rejects_invalid():
    with pytest.raises(SingularInstanceError):
        verify.check_n_independence([1, 2], [1, 3], [2, 4])


# --- mutation sensitivity -------------------------------------------------------


def test_perturbed_b_bottom_is_detected():
    rng = SplitMix64(123)
    for m in (2, 3, 4):
        for inst in seeded_instances(960 + m, m, 4):
            row = 1 + rng.below(m)
            col = 1 + rng.below(2 * m)
            report = verify.run_all_perturbed(inst, row, col)
            assert report.valid
            assert not report.passed
            failed = [r.name for r in report.records if not r.passed]
            assert failed, "perturbation went unnoticed"
            # the formula-side inverses no longer invert the windows
            assert "window_quotients" in failed


def test_perturbation_reports_counterexample(inst_m2):
    report = verify.run_all_perturbed(inst_m2, 1, 1)
    bad = [r for r in report.records if not r.passed]
    assert all(r.counterexample is not None for r in bad)
    assert all(r.max_residual > 0 for r in bad)


def test_perturbation_index_bounds(inst_m2):
    with pytest.raises(IndexError):
        verify.run_all_perturbed(inst_m2, 0, 1)
    with pytest.raises(IndexError):
        verify.run_all_perturbed(inst_m2, 1, 5)


def test_unperturbed_override_changes_nothing(inst_m2):
    report = verify.run_all_perturbed(inst_m2, 1, 1, delta=0)
    assert report.passed


# --- verdict invariance under scaling of n ---------------------------------------


@settings(max_examples=15, deadline=None)
@given(st.integers(-5, 5).filter(lambda c: c != 0), st.integers(0, 10_000))
def test_verdict_invariant_under_scaling_n(c, seed):
    inst = seeded_instances(seed, 3, 1)[0]
    scaled = Instance.from_coeffs(inst.d, [rat(c) * v for v in inst.n])
    base = verify.run_all(inst)
    other = verify.run_all(scaled)
    assert base.valid == other.valid
    assert [
        (r.name, r.passed) for r in base.records
    ] == [(r.name, r.passed) for r in other.records]
