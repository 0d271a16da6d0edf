import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sylwin.builders import (
    FailureReason,
    Instance,
    a_bottom,
    b_bottom,
    bezout_matrix,
    build_d,
    build_dl,
    build_dr,
    build_k,
    build_m,
    build_n,
    build_s,
    d_lower,
    invert_d_structured,
    invert_s_structured,
    validate,
)
from sylwin.numeric import EqPolicy, SingularInstanceError, matrices_equal
from sylwin.oracle import dense_det, dense_inverse
from sylwin.structmat import as_matrix, densify, identity, invert_lower, mat_mul, window

EXACT = EqPolicy.exact()


def eq(x, y):
    return matrices_equal(x, y, EXACT).equal


# --- Instance -------------------------------------------------------------


def test_instance_order():
    assert Instance.from_coeffs([1, 2], [3, 4]).m == 1
    assert Instance.from_coeffs([1, 2, 3], [4, 5, 6]).m == 2


def test_instance_rejects_bad_lengths():
    with pytest.raises(ValueError):
        Instance.from_coeffs([1], [1])
    with pytest.raises(ValueError):
        Instance.from_coeffs([1, 2, 3], [1, 2])


# --- block assembly against hand layouts ----------------------------------


def test_build_s_order_one(inst_m1):
    assert eq(build_s(inst_m1), as_matrix([[1, 1], [2, 3]]))


def test_build_s_order_two(inst_m2):
    expected = as_matrix(
        [[1, 0, 1, 0], [1, 1, 2, 1], [1, 1, 3, 2], [0, 1, 0, 3]]
    )
    assert eq(build_s(inst_m2), expected)


def test_build_s_is_total_for_invalid_data():
    inst = Instance.from_coeffs([1, 0], [1, 3])
    assert build_s(inst).shape == (2, 2)
    assert not validate(inst).strict_ok


def test_build_d_order_one(inst_m1):
    assert eq(build_d(inst_m1), as_matrix([[1, 0], [2, 1]]))


def test_build_d_order_two(inst_m2):
    expected = as_matrix(
        [[1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 0], [0, 1, 1, 1]]
    )
    assert eq(build_d(inst_m2), expected)


def test_build_d_degenerates_to_identity():
    inst = Instance.from_coeffs([1, 0, 0], [1, 1, 1])
    assert eq(build_d(inst), identity(4))


def test_tall_stacks_order_one(inst_m1):
    assert eq(build_dl(inst_m1), as_matrix([[1], [2]]))
    assert eq(build_dr(inst_m1), as_matrix([[0], [1]]))
    assert eq(build_n(inst_m1), as_matrix([[1], [3]]))


def test_tall_stack_n_order_two(inst_m2):
    assert eq(build_n(inst_m2), as_matrix([[1, 0], [2, 1], [3, 2], [0, 3]]))


def test_build_k_order_one(inst_m1):
    assert eq(build_k(inst_m1), as_matrix([[1, 0], [2, 1], [0, 2]]))


def test_build_m_order_one(inst_m1):
    assert eq(build_m(inst_m1), as_matrix([[1, 0], [3, 1], [0, 3]]))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_k_windows_are_padded_dl(m):
    inst = Instance.from_coeffs(range(1, m + 2), range(2, m + 3))
    k = build_k(inst)
    dl = build_dl(inst)
    for i in range(1, m + 2):
        win = window(k, i, m)
        # i-1 zero rows above, D_l in the middle, m-i+1 zero rows below
        assert (win[: i - 1, :] == 0).all()
        assert eq(win[i - 1 : i - 1 + 2 * m, :], dl)
        assert (win[i - 1 + 2 * m :, :] == 0).all()


# --- Bezoutian -------------------------------------------------------------


def test_bezout_order_one(inst_m1):
    assert eq(bezout_matrix(inst_m1), as_matrix([[1]]))


def test_bezout_order_two(inst_m2):
    assert eq(bezout_matrix(inst_m2), as_matrix([[2, 1], [1, 2]]))


def test_bezout_vanishes_when_n_equals_d():
    inst = Instance.from_coeffs([1, 2, 3], [1, 2, 3])
    assert (bezout_matrix(inst) == 0).all()


def test_bezout_alternate_form(inst_m2):
    from sylwin.builders import d_upper, n_lower, n_upper

    alt = mat_mul(densify(n_upper(inst_m2)), densify(d_lower(inst_m2))) - mat_mul(
        densify(d_upper(inst_m2)), densify(n_lower(inst_m2))
    )
    assert eq(bezout_matrix(inst_m2), alt)


# --- structured inverses ----------------------------------------------------


def test_invert_s_structured_order_one(inst_m1):
    assert eq(invert_s_structured(inst_m1), as_matrix([[3, -1], [-2, 1]]))


def test_invert_s_structured_bottom_rows(inst_m2):
    expected = as_matrix(
        [["-1/3", "-1/3", "2/3", "-1/3"], ["1/3", "-2/3", "1/3", "1/3"]]
    )
    assert eq(b_bottom(inst_m2), expected)


def test_invert_s_structured_inverse_contract(inst_m2):
    product = mat_mul(build_s(inst_m2), invert_s_structured(inst_m2))
    assert eq(product, identity(4))


def test_invert_d_structured_order_one(inst_m1):
    assert eq(invert_d_structured(inst_m1), as_matrix([[1, 0], [-2, 1]]))


def test_invert_d_structured_bottom_rows(inst_m2):
    expected = as_matrix([[0, -1, 1, 0], [1, 0, -1, 1]])
    assert eq(a_bottom(inst_m2), expected)


def test_invert_d_identity_case():
    inst = Instance.from_coeffs([1, 0, 0], [1, 1, 1])
    assert eq(invert_d_structured(inst), identity(4))


def test_singular_bezoutian_raises():
    inst = Instance.from_coeffs([1, 2], [2, 4])
    with pytest.raises(SingularInstanceError):
        invert_s_structured(inst)


def test_zero_leading_coefficient_raises():
    inst = Instance.from_coeffs([0, 2], [1, 3])
    with pytest.raises(SingularInstanceError):
        invert_d_structured(inst)


nonzero = st.integers(-9, 9).filter(lambda v: v != 0)


def _instances(max_m=5):
    return st.integers(1, max_m).flatmap(
        lambda m: st.tuples(
            st.lists(nonzero, min_size=m + 1, max_size=m + 1),
            st.lists(nonzero, min_size=m + 1, max_size=m + 1),
        )
    ).map(lambda dn: Instance.from_coeffs(dn[0], dn[1]))


@settings(max_examples=30, deadline=None)
@given(_instances())
def test_structured_inverses_match_oracle(inst):
    if not validate(inst, "relaxed").relaxed_ok:
        return
    assert eq(invert_s_structured(inst), dense_inverse(build_s(inst)))
    assert eq(invert_d_structured(inst), dense_inverse(build_d(inst)))
    assert eq(mat_mul(build_d(inst), invert_d_structured(inst)), identity(2 * inst.m))


# --- validity ----------------------------------------------------------------


def test_validate_strict_ok(inst_m1):
    v = validate(inst_m1, "strict")
    assert v.strict_ok and v.relaxed_ok and v.failure_reason is None


def test_validate_singular_bezoutian():
    v = validate(Instance.from_coeffs([1, 2], [2, 4]))
    assert not v.relaxed_ok
    assert v.failure_reason is FailureReason.SINGULAR_BEZOUTIAN


def test_validate_zero_interior_coefficient():
    # d = (1, 0, 1), n = (1, 1, 1): Bezoutian is [[0, 1], [-1, 0]], det 1
    inst = Instance.from_coeffs([1, 0, 1], [1, 1, 1])
    v = validate(inst, "strict")
    assert not v.strict_ok
    assert v.failure_reason is FailureReason.ZERO_D_ENTRY
    assert v.relaxed_ok
    assert validate(inst, "relaxed").failure_reason is None


def test_validate_zero_d1():
    v = validate(Instance.from_coeffs([0, 2], [1, 3]), "relaxed")
    assert not v.relaxed_ok and v.failure_reason is FailureReason.D_FIRST_ZERO


def test_validate_zero_d_last():
    v = validate(Instance.from_coeffs([2, 0], [1, 3]), "relaxed")
    assert not v.relaxed_ok and v.failure_reason is FailureReason.D_LAST_ZERO


any_coeff = st.integers(-3, 3)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 3).flatmap(
        lambda m: st.tuples(
            st.lists(any_coeff, min_size=m + 1, max_size=m + 1),
            st.lists(any_coeff, min_size=m + 1, max_size=m + 1),
        )
    )
)
def test_relaxed_validity_iff_oracle_invertibility(dn):
    inst = Instance.from_coeffs(dn[0], dn[1])
    relaxed = validate(inst, "relaxed").relaxed_ok
    s_invertible = dense_det(build_s(inst)) != 0
    d_invertible = dense_det(build_d(inst)) != 0
    # the Bezoutian determinant equals det(S) identically, so relaxed
    # validity is S-invertibility plus the two triangular hypotheses
    assert (dense_det(bezout_matrix(inst)) != 0) == s_invertible
    assert relaxed == (inst.d[0] != 0 and inst.d[-1] != 0 and s_invertible)
    assert (inst.d[0] != 0) == d_invertible
