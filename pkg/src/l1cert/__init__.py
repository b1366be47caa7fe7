"""Exact certification of unique least l1-norm solutions and l0/l1 equivalence."""

__version__ = "0.1.0"

from .analysis import (
    CoherenceReport,
    OrderRspReport,
    RecoveryResult,
    ZeroColumn,
    build_H_G,
    mutual_coherence,
    rsp_order,
    spark,
    uniform_recovery_oracle,
    weak_rsp_order,
)
from .l1opt import (
    InconsistentSystem,
    KmaxExceeded,
    LinearSystem,
    Lp3Construction,
    NotASolution,
    SparsestSet,
    basis_pursuit_lp,
    build_lp1,
    build_lp3,
    solve_min_l1,
    sparsest_solutions,
)
from .lp import Bound, LpOutcome, LpProblem, Sense, Status, optimal_face_range, simplex_solve, to_standard_form
from .rational import (
    LinearSolution,
    RationalMatrix,
    columns_independent,
    nullspace_basis,
    parse_rational,
    rank,
    rref,
    solve_linear,
)
from .rsp import (
    DualCertificate,
    Group,
    RspPointReport,
    SupportPartition,
    SystemClassification,
    UniquenessVerdict,
    certify_unique_l1,
    classify_system,
    dual_certificate_from_eta,
    rsp_at_point,
    support_partition,
)
