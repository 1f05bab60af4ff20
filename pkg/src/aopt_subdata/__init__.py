"""A-optimal subdata selection for model selection in big linear regression."""

from .linalg_core import (
    InverseInfoState,
    RemovalScore,
    ThinSvd,
    a_criterion,
    apply_removal,
    inverse_info,
    leverage_scores,
    removal_score,
    thin_svd,
)
from .modelsel import (
    CandidateSetReport,
    FitResult,
    adjusted_intercept,
    all_subset_bic,
    bic_score,
    forward_bic,
    ols_fit,
)
from .preprocess import DataMatrix, centralize, load_csv, scale_to_unit_interval
from .simgen import CaseSpec, TrueModelSpec, gen_covariates, gen_response, gen_true_model
from .subselect import (
    EliminationPool,
    SelectionResult,
    eliminate_alg1,
    eliminate_alg2,
    greedy_a_prune,
    levss_select,
    select_subdata,
)

__version__ = "0.1.0"
