"""Windowed-submatrix inverse identities of Sylvester and triangular
Toeplitz block matrices, verified exactly over rationals.

The package constructs the Sylvester block matrix S and the block lower
triangular matrix D from two coefficient vectors, inverts both through
closed-form structured formulas (Bezoutian blocks for S, triangular
Toeplitz recursion for D), and verifies the full family of identities
satisfied by the column windows of the bottom row blocks of those
inverses: window product symmetry A_i B_j = A_j B_i, the closed-form
window inverses through the kernel matrix, commutation and shift
invariance of the window quotients, and independence of B_i^-1 B_j from
the second coefficient vector. Every structured result is cross-checked
against an independent dense Gauss-Jordan oracle.
"""

from .builders import (
    FailureReason,
    Instance,
    Validity,
    bezout_matrix,
    build_d,
    build_dl,
    build_dr,
    build_k,
    build_m,
    build_n,
    build_s,
    invert_d_structured,
    invert_s_structured,
    validate,
)
from .kernel import (
    KernelT,
    a_inv,
    a_window,
    b_inv,
    b_window,
    build_t,
    h_matrix,
    h_window,
    mirror_index,
    t_block,
    t_window,
)
from .numeric import (
    DEFAULT_TOL,
    FIELDS,
    FLOAT64,
    RATIONAL,
    DimensionError,
    EqPolicy,
    MatchResult,
    SingularInstanceError,
    SingularMatrixError,
    matrices_equal,
    rat,
)
from .oracle import dense_det, dense_inverse
from .structmat import (
    LowerToeplitz,
    UpperToeplitz,
    densify,
    identity,
    invert_lower,
    invert_upper,
    lower_from_coeffs,
    lower_mul,
    mat_mul,
    mat_sub,
    upper_from_coeffs,
    upper_mul,
    window,
    zeros,
)
from .verify import (
    CheckRecord,
    IdentityReport,
    check_h_windows,
    check_kernel_annihilation,
    check_n_independence,
    check_product_symmetry,
    check_quotient_commutation,
    check_ratio_invariance,
    check_shift_invariance,
    check_structured_inverse_d,
    check_structured_inverse_s,
    check_window_commutation,
    check_window_inverse_oracle,
    check_window_quotients,
    check_window_times_h,
    run_all,
    run_all_perturbed,
)

__version__ = "0.1.0"
