"""Data-driven behavioral modeling for linear, affine, and positive systems.

Builds Hankel representations of finite-horizon behaviors, certifies rank
and non-negative-rank persistence-of-excitation conditions, answers hull
membership queries, and constructs finite-horizon most-powerful-unfalsified
models.
"""

from .behavior import (
    FiniteBehavior,
    HankelMatrix,
    Hull,
    MembershipCertificate,
    Trajectory,
    behavior_from_hankel,
    behavior_from_json_dict,
    behavior_included,
    behavior_to_json_dict,
    build_hankel,
    membership,
    restrict,
    sector_membership,
    shift,
    trajectory_from_csv,
    trajectory_to_csv,
)
from .linalg import SolveResult, affine_nonneg_feasible, least_squares, nnls, numeric_rank
from .mpum import MpumResult, minimality_check, mpum_finite, unfalsified_check
from .nnrank import (
    DEFAULT_SEED,
    CombinatorialCapError,
    MonomialCertificate,
    NnRankBounds,
    NnRankConfig,
    fooling_set_bound,
    monomial_submatrix,
    nmf_search,
    nonneg_rank_bounds,
    support_pattern,
)
from .pecheck import (
    ModelClass,
    PEReport,
    Verdict,
    data_driven_representation,
    pe_check_affine,
    pe_check_linear,
    pe_check_positive,
    pe_check_positive_affine,
    pe_report_to_json_dict,
)
from .statespace import (
    StateSpaceModel,
    StateTrajectory,
    convolution_matrix,
    factorization_check,
    is_internally_positive,
    lag,
    leslie_model,
    model_from_json_dict,
    model_matrix,
    model_to_json_dict,
    observability_matrix,
    simulate,
    state_trajectory_from_csv,
    state_trajectory_to_csv,
)

__all__ = [
    "CombinatorialCapError",
    "DEFAULT_SEED",
    "FiniteBehavior",
    "HankelMatrix",
    "Hull",
    "MembershipCertificate",
    "ModelClass",
    "MonomialCertificate",
    "MpumResult",
    "NnRankBounds",
    "NnRankConfig",
    "PEReport",
    "SolveResult",
    "StateSpaceModel",
    "StateTrajectory",
    "Trajectory",
    "Verdict",
    "affine_nonneg_feasible",
    "behavior_from_hankel",
    "behavior_from_json_dict",
    "behavior_included",
    "behavior_to_json_dict",
    "build_hankel",
    "convolution_matrix",
    "data_driven_representation",
    "factorization_check",
    "fooling_set_bound",
    "is_internally_positive",
    "lag",
    "least_squares",
    "leslie_model",
    "membership",
    "minimality_check",
    "model_from_json_dict",
    "model_matrix",
    "model_to_json_dict",
    "monomial_submatrix",
    "mpum_finite",
    "nmf_search",
    "nnls",
    "nonneg_rank_bounds",
    "numeric_rank",
    "observability_matrix",
    "pe_check_affine",
    "pe_check_linear",
    "pe_check_positive",
    "pe_check_positive_affine",
    "pe_report_to_json_dict",
    "restrict",
    "sector_membership",
    "shift",
    "simulate",
    "state_trajectory_from_csv",
    "state_trajectory_to_csv",
    "support_pattern",
    "trajectory_from_csv",
    "trajectory_to_csv",
    "unfalsified_check",
]
