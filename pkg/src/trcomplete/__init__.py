"""Tensor ring completion by nuclear norm minimization over balanced
unfoldings, with the measurement and experiment tooling around it."""

from .analysis import (
    ResourceLimitError,
    TangentSpace,
    condition1_gap,
    df_square_unfolding,
    df_tensor_ring,
    tangent_complement,
    tangent_projection,
)
from .estimator import TensorRingCompleter
from .experiments import (
    CURVE_SUCCESS_THRESHOLD,
    GRID_SUCCESS_THRESHOLD,
    ExperimentReport,
    curve_success_rates,
    run_phase_grid,
    run_recovery_curve,
)
from .fileio import FormatError
from .metrics import psnr, relative_error
from .ring import (
    IncoherenceProfile,
    TRFactors,
    classify_state,
    incoherence_profile,
    random_tr,
    tr_contract,
    tr_synthesize,
    unfolding_rank,
)
from .sampling import (
    ObservationMask,
    bernoulli_mask,
    mask_from_bool,
    project_omega,
    uniform_mask,
)
from .solver import SolverConfig, SolverTrace, svt, trbu_complete
from .tensor_ops import (
    MatricizationPlan,
    fold,
    frobenius_norm,
    inner_product,
    matricization_plan,
    permute,
    unfold,
)
from .vdt import VdtPlan, vdt_forward, vdt_inverse

__version__ = "0.1.0"

__all__ = [
    "CURVE_SUCCESS_THRESHOLD",
    "GRID_SUCCESS_THRESHOLD",
    "ExperimentReport",
    "FormatError",
    "IncoherenceProfile",
    "MatricizationPlan",
    "ObservationMask",
    "ResourceLimitError",
    "SolverConfig",
    "SolverTrace",
    "TangentSpace",
    "TensorRingCompleter",
    "TRFactors",
    "VdtPlan",
    "bernoulli_mask",
    "classify_state",
    "condition1_gap",
    "curve_success_rates",
    "df_square_unfolding",
    "df_tensor_ring",
    "fold",
    "frobenius_norm",
    "incoherence_profile",
    "inner_product",
    "mask_from_bool",
    "matricization_plan",
    "permute",
    "project_omega",
    "psnr",
    "random_tr",
    "relative_error",
    "run_phase_grid",
    "run_recovery_curve",
    "svt",
    "tangent_complement",
    "tangent_projection",
    "tr_contract",
    "tr_synthesize",
    "trbu_complete",
    "unfold",
    "unfolding_rank",
    "uniform_mask",
    "vdt_forward",
    "vdt_inverse",
]
