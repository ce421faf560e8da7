"""Moore-Penrose inverses of structured products X N Y.

Closed-form pseudo-inverse expressions for products of a general matrix N
with nonsingular factors X and Y that are block triangular in N's singular
bases, together with the validators for those structural hypotheses, an
independent SVD oracle to verify every formula against, reproducible
instance generators, and a file-based CLI.
"""

from .bench import BenchRecord, run_bench, summarize, write_csv
from .decomp import (
    NotHpdError,
    PenroseResiduals,
    SingularMatrixError,
    SvdConvergenceError,
    SvdFactors,
    inverse,
    penrose_residuals,
    pinv_oracle,
    solve_hpd,
    svd,
)
from .formulas import (
    METHODS,
    HypothesisCheck,
    HypothesisViolationError,
    PinvResult,
    inner_inverse_check,
    pinv_block,
    pinv_ny,
    pinv_oracle_result,
    pinv_xn,
    pinv_xny,
    pinv_xny_baseline,
    pinv_xny_hermitian,
    proj_range_m1,
    proj_rowspace_m2,
)
from .generators import BASE_FLAVORS, Instance, InstanceSpec, Note, generate, haar_unitary
from .matrix import (
    DEFAULT_TOL,
    DimensionMismatchError,
    add,
    approx_eq,
    as_matrix,
    block_assemble,
    block_split,
    conj_transpose,
    frobenius_norm,
    identity,
    is_normal,
    matmul,
    rel_diff,
    scale,
    sub,
    zeros,
)
from .mmio import MatrixMarketError, read_matrix, write_matrix
from .projectors import (
    CONDITION_IDS,
    ConditionVerdict,
    ProjectorPair,
    StructureReport,
    Witness,
    check_condition,
    condition_side,
    factor_l,
    factor_l0,
    factor_r,
    factor_r0,
    implies_structure,
    normalize_condition_id,
    projectors,
    structure_report_x,
    structure_report_y,
)

__version__ = "0.1.0"
