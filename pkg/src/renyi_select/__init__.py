"""Kernel-spectrum Renyi entropy estimators and greedy feature selection
with principled stopping criteria."""

from .data import (
    Dataset,
    DiscretizedView,
    bundled_dataset_path,
    dataset_from_arrays,
    discretize_equal_frequency,
    load_csv,
    save_csv,
    standardize,
    subsample,
)
from .entropy import (
    Alpha,
    Eigenspectrum,
    conditional_mutual_information,
    eigenspectrum,
    joint_entropy,
    mutual_information,
    renyi_entropy,
)
from .evaluation import (
    BootstrapResult,
    LinearModel,
    RankTable,
    bootstrap_accuracy,
    optimal_feature_count,
    paired_t_test,
    rank_criteria,
    train_linear,
    wilcoxon_rank_sum,
)
from .kernels import (
    GramMatrix,
    gram_delta,
    gram_gaussian,
    hadamard_normalized,
    median_bandwidth,
)
from .selection import (
    SelectionConfig,
    SelectionState,
    SelectionStep,
    SelectionTrace,
    StopDecision,
    best_candidate,
    chi2_quantile,
    criterion_cmi_heuristic,
    criterion_cmi_permutation,
    criterion_delta_mi_chi2,
    criterion_mi_permutation,
    greedy_select,
    prepare_state,
)

__version__ = "0.1.0"

__all__ = [
    "Alpha",
    "BootstrapResult",
    "Dataset",
    "DiscretizedView",
    "Eigenspectrum",
    "GramMatrix",
    "LinearModel",
    "RankTable",
    "SelectionConfig",
    "SelectionState",
    "SelectionStep",
    "SelectionTrace",
    "StopDecision",
    "best_candidate",
    "bootstrap_accuracy",
    "bundled_dataset_path",
    "chi2_quantile",
    "conditional_mutual_information",
    "criterion_cmi_heuristic",
    "criterion_cmi_permutation",
    "criterion_delta_mi_chi2",
    "criterion_mi_permutation",
    "dataset_from_arrays",
    "discretize_equal_frequency",
    "eigenspectrum",
    "gram_delta",
    "gram_gaussian",
    "greedy_select",
    "hadamard_normalized",
    "joint_entropy",
    "load_csv",
    "median_bandwidth",
    "mutual_information",
    "optimal_feature_count",
    "paired_t_test",
    "prepare_state",
    "rank_criteria",
    "renyi_entropy",
    "save_csv",
    "standardize",
    "subsample",
    "train_linear",
    "wilcoxon_rank_sum",
]
