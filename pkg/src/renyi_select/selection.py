"""Greedy forward feature selection with pluggable stopping criteria.

The selector maximizes the kernel-spectrum MI between the selected group
and the labels, one feature at a time. Before a candidate is committed,
the configured criterion decides whether to keep going:

* ``cmi-heuristic``: stop once the residual CMI of the not-yet-selected
  features (given the selection plus the candidate) falls to a tiny
  threshold epsilon.
* ``cmi-permutation``: permutation test on that residual CMI; continue
  only while the observed residual is significantly smaller than the
  residuals obtained with a shuffled candidate column.
* ``mi-permutation``: permutation test on the MI gain; continue only
  while the candidate's MI beats the shuffled versions.
* ``dmi-chi2``: compare the discrete plug-in CMI increment against a
  chi-square quantile (G-test construction over equal-frequency bins).
* ``none``: select everything (or up to max_features).

All randomness is driven by per-(seed, step, draw) generator streams, so
runs are pure functions of (dataset, config, seed) under any scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import special as sp_special

from ._parallel import parallel_map
from .data import Dataset, DiscretizedView, discretize_equal_frequency, standardize
from .entropy import Alpha, _as_alpha, entropy_of_unit, entropy_of_unit_label_masked
from .errors import (
    InvalidPermutationCount,
    InvalidProbability,
    NoRemainingFeatures,
)
from .kernels import GramMatrix, gram_delta, gram_gaussian, median_bandwidth

CRITERIA = ("cmi-heuristic", "cmi-permutation", "mi-permutation", "dmi-chi2", "none")


@dataclass(frozen=True)
class SelectionConfig:
    """Knobs of a greedy selection run.

    theta is the confidence level of the permutation and chi-square
    criteria; permutations is the number of shuffles P per tested
    candidate; epsilon the residual-CMI threshold of the heuristic rule.
    """

    criterion: str = "none"
    alpha: float = 1.01
    epsilon: float = 1e-4
    permutations: int = 100
    theta: float = 0.95
    chi2_bins: int = 5
    seed: int = 0
    max_features: int | None = None

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ValueError(f"unknown criterion {self.criterion!r}")
        Alpha(self.alpha)
        if not (0.0 < self.theta < 1.0):
            raise ValueError("theta must lie strictly between 0 and 1")
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be non-negative")
        if self.criterion in ("cmi-permutation", "mi-permutation") and self.permutations < 1:
            raise InvalidPermutationCount("permutations must be >= 1")
        if self.chi2_bins < 1:
            raise ValueError("chi2_bins must be >= 1")


@dataclass
class SelectionState:
    """Caches shared by the scorer and the stopping criteria.

    cached_selected_gram holds the running Hadamard product over the
    selected features (the all-ones unit matrix for the empty set);
    full_gram the product over all features. Criteria only read the
    state; commits happen in greedy_select between steps.
    """

    dataset: Dataset
    alpha: Alpha
    selected: list[int]
    remaining: list[int]
    single_grams: list[GramMatrix]
    label_gram: GramMatrix
    cached_selected_gram: GramMatrix
    full_gram: GramMatrix
    class_groups: list[np.ndarray]
    label_entropy: float
    full_mi: float
    scores: dict[int, float] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.dataset.n


def prepare_state(d: Dataset, alpha=1.01) -> SelectionState:
    """Standardize the data and precompute every per-feature Gram matrix,
    the label Gram matrix, the all-features product and the full-set MI."""
    alpha = _as_alpha(alpha)
    std = standardize(d)
    singles = []
    for j in range(std.F):
        col = std.column(j)
        singles.append(gram_gaussian(col, median_bandwidth(col)))
    label_gram = gram_delta(std.labels)
    groups = [np.flatnonzero(std.labels == c) for c in range(std.C)]
    full_unit = np.ones((std.n, std.n))
    for g in singles:
        full_unit *= g.unit
    s_label = entropy_of_unit_label_masked(np.ones((std.n, std.n)), groups, alpha)
    full_mi = (
        s_label
        + entropy_of_unit(full_unit, alpha)
        - entropy_of_unit_label_masked(full_unit, groups, alpha)
    )
    return SelectionState(
        dataset=std,
        alpha=alpha,
        selected=[],
        remaining=list(range(std.F)),
        single_grams=singles,
        label_gram=label_gram,
        cached_selected_gram=GramMatrix(np.ones((std.n, std.n))),
        full_gram=GramMatrix(full_unit),
        class_groups=groups,
        label_entropy=s_label,
        full_mi=full_mi,
    )


def _group_mi(state: SelectionState, unit: np.ndarray) -> float:
    """MI between the labels and the feature group whose unit-diagonal
    Hadamard product is `unit`."""
    return (
        state.label_entropy
        + entropy_of_unit(unit, state.alpha)
        - entropy_of_unit_label_masked(unit, state.class_groups, state.alpha)
    )


def candidate_mi(state: SelectionState, cand: int) -> float:
    """MI of the selected group extended with one candidate feature."""
    if cand in state.scores:
        return state.scores[cand]
    unit = state.cached_selected_gram.unit * state.single_grams[cand].unit
    mi = _group_mi(state, unit)
    state.scores[cand] = mi
    return mi


def best_candidate(state: SelectionState, alpha=None) -> int:
    """The remaining feature maximizing the extended-group MI; ties break
    to the lowest index.

    Raises:
        NoRemainingFeatures: nothing left to score.
    """
    if alpha is not None and _as_alpha(alpha) != state.alpha:
        raise ValueError("alpha differs from the alpha the state was prepared with")
    if not state.remaining:
        raise NoRemainingFeatures("no remaining features to score")
    mis = parallel_map(lambda x: candidate_mi(state, x), sorted(state.remaining))
    order = sorted(state.remaining)
    best = int(np.argmax(mis))  # first max = lowest feature index
    return order[best]


@dataclass(frozen=True)
class StopDecision:
    """Outcome of one criterion evaluation: stop (True) or continue,
    with the statistic/threshold pair the predicate was applied to."""

    stop: bool
    statistic: float | None
    threshold: float | None
    detail: dict = field(default_factory=dict)


def _residual_cmi(state: SelectionState, cand: int) -> float:
    """Residual CMI of the unselected complement given selection + cand,
    via the exact identity residual = full-set MI - extended-group MI."""
    return state.full_mi - candidate_mi(state, cand)


def criterion_cmi_heuristic(state, cand, alpha=None, epsilon: float = 1e-4) -> StopDecision:
    """Stop when the residual CMI after accepting `cand` is <= epsilon.

    With no complement left the residual is exactly zero, which stops.
    """
    del alpha  # bound in state
    rest = [x for x in state.remaining if x != cand]
    if not rest:
        return StopDecision(True, 0.0, epsilon, {"reason": "no-remaining-complement"})
    statistic = _residual_cmi(state, cand)
    return StopDecision(statistic <= epsilon, statistic, epsilon, {})


def _permuted_gram_unit(state: SelectionState, cand: int, perm: np.ndarray) -> np.ndarray:
    """Gram matrix of the candidate column under a row permutation.

    Shuffling the column values and re-evaluating the kernel equals
    gathering rows and columns of the original Gram matrix, because the
    bandwidth (a function of the value multiset) is unchanged.
    """
    return state.single_grams[cand].unit[np.ix_(perm, perm)]


def _perm_rng(seed: int, step: int, draw: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed % 2**64, step, draw)))


def criterion_cmi_permutation(
    state, cand, alpha=None, permutations: int = 100, theta: float = 0.95, seed: int = 0
) -> StopDecision:
    """Permutation test on the residual CMI.

    The observed residual (real candidate in the conditioning group) is
    compared against P residuals computed with shuffled copies of the
    candidate column. Selection continues only while the observed value
    is significantly smaller: stop as soon as the fraction of shuffles
    with observed >= permuted exceeds 1 - theta.

    Raises:
        InvalidPermutationCount: permutations < 1.
    """
    del alpha
    if permutations < 1:
        raise InvalidPermutationCount("permutations must be >= 1")
    threshold = 1.0 - theta
    rest = [x for x in state.remaining if x != cand]
    step = len(state.selected)
    if not rest:
        # the complement is empty: observed and permuted residuals are all
        # exactly zero, so the observed value exceeds every shuffle
        return StopDecision(
            True,
            1.0,
            threshold,
            {"observed_cmi": 0.0, "exceedance_count": permutations,
             "permutations": permutations, "reason": "no-remaining-complement"},
        )
    observed = _residual_cmi(state, cand)
    rest_unit = np.ones((state.n, state.n))
    for x in rest:
        rest_unit *= state.single_grams[x].unit
    sel_unit = state.cached_selected_gram.unit

    def permuted_residual(i: int) -> float:
        perm = _perm_rng(seed, step, i).permutation(state.n)
        m1 = sel_unit * _permuted_gram_unit(state, cand, perm)
        m2 = m1 * rest_unit
        return (
            entropy_of_unit(m2, state.alpha)
            - entropy_of_unit_label_masked(m2, state.class_groups, state.alpha)
            - entropy_of_unit(m1, state.alpha)
            + entropy_of_unit_label_masked(m1, state.class_groups, state.alpha)
        )

    permuted = parallel_map(permuted_residual, range(permutations))
    count = int(sum(observed >= p for p in permuted))
    fraction = count / permutations
    return StopDecision(
        fraction > threshold,
        fraction,
        threshold,
        {"observed_cmi": observed, "exceedance_count": count,
         "permutations": permutations, "permuted_mean": float(np.mean(permuted))},
    )


def criterion_mi_permutation(
    state, cand, alpha=None, permutations: int = 100, theta: float = 0.95, seed: int = 0
) -> StopDecision:
    """Permutation test on the MI of the extended group.

    Continue only while the observed MI is significantly larger than the
    MI obtained with shuffled candidate columns: stop as soon as the
    fraction of shuffles with observed <= permuted exceeds 1 - theta.

    Raises:
        InvalidPermutationCount: permutations < 1.
    """
    del alpha
    if permutations < 1:
        raise InvalidPermutationCount("permutations must be >= 1")
    threshold = 1.0 - theta
    observed = candidate_mi(state, cand)
    sel_unit = state.cached_selected_gram.unit
    step = len(state.selected)

    def permuted_mi(i: int) -> float:
        perm = _perm_rng(seed, step, i).permutation(state.n)
        m1 = sel_unit * _permuted_gram_unit(state, cand, perm)
        return _group_mi(state, m1)

    permuted = parallel_map(permuted_mi, range(permutations))
    count = int(sum(observed <= p for p in permuted))
    fraction = count / permutations
    return StopDecision(
        fraction > threshold,
        fraction,
        threshold,
        {"observed_mi": observed, "nonexceedance_count": count,
         "permutations": permutations, "permuted_mean": float(np.mean(permuted))},
    )


def chi2_quantile(df: int, p: float) -> float:
    """p-quantile of the chi-square distribution with df degrees of
    freedom, by inverting the regularized incomplete gamma function.

    Raises:
        InvalidProbability: p outside (0, 1).
    """
    if not (0.0 < p < 1.0):
        raise InvalidProbability(f"p must lie in (0, 1), got {p}")
    if df < 1:
        raise ValueError("df must be >= 1")
    return float(2.0 * sp_special.gammaincinv(df / 2.0, p))


def _discrete_cmi_nats(x, y, z_cell, n_x: int, n_y: int, n_z: int) -> float:
    """Plug-in conditional MI I(X;Y|Z) in nats from integer codes."""
    n = x.size
    flat = (z_cell * n_x + x) * n_y + y
    n_zxy = np.bincount(flat, minlength=n_z * n_x * n_y).reshape(n_z, n_x, n_y)
    n_zx = n_zxy.sum(axis=2, keepdims=True)
    n_zy = n_zxy.sum(axis=1, keepdims=True)
    n_z_tot = n_zxy.sum(axis=(1, 2), keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = n_zxy * n_z_tot / (n_zx * n_zy)
        terms = np.where(n_zxy > 0, n_zxy * np.log(ratio), 0.0)
    return float(terms.sum() / n)


def criterion_delta_mi_chi2(state, cand, discretized: DiscretizedView, theta: float = 0.95) -> StopDecision:
    """G-test style rule: stop when 2 n I(cand; y | selected), computed
    from discrete contingency counts, falls below the theta chi-square
    quantile with df = (c_cand - 1)(C - 1) prod(selected cardinalities).

    When the conditioning cell count exceeds n the counts are too sparse
    for the test and selection stops with reason "chi2-cells-exhausted".
    """
    cards = discretized.cardinalities
    cells = 1
    for z in state.selected:
        cells *= cards[z]
    n = state.n
    if cells > n:
        return StopDecision(True, None, None,
                            {"reason": "chi2-cells-exhausted", "cells": cells})
    c_x = cards[cand]
    c_y = discretized.label_cardinality
    df = (c_x - 1) * (c_y - 1) * cells
    if df < 1:
        return StopDecision(True, 0.0, None, {"reason": "degenerate-df"})
    z_cell = np.zeros(n, dtype=np.int64)
    for z in state.selected:
        z_cell = z_cell * cards[z] + discretized.columns[:, z]
    cmi_nats = _discrete_cmi_nats(
        discretized.columns[:, cand], state.dataset.labels, z_cell, c_x, c_y, cells
    )
    statistic = 2.0 * n * cmi_nats
    threshold = chi2_quantile(df, theta)
    return StopDecision(statistic < threshold, statistic, threshold,
                        {"df": df, "cmi_nats": cmi_nats, "cells": cells})


@dataclass(frozen=True)
class SelectionStep:
    """One committed feature: its MI/CMI after the commit and the
    criterion diagnostics that allowed it."""

    index: int
    name: str
    mi: float
    cmi: float
    statistic: float | None
    threshold: float | None
    detail: dict


@dataclass
class SelectionTrace:
    """Full record of a greedy run: the committed steps in order, why the
    run stopped, the rejected candidate's decision (if any) and the
    full-set MI that anchors the mi + cmi identity."""

    steps: list[SelectionStep]
    stop_reason: str
    full_mi: float
    final_decision: StopDecision | None = None
    rejected_index: int | None = None

    @property
    def selected_indices(self) -> list[int]:
        return [s.index for s in self.steps]

    @property
    def selected_names(self) -> list[str]:
        return [s.name for s in self.steps]


def _evaluate_criterion(state, cand, config, discretized) -> StopDecision:
    if config.criterion == "none":
        return StopDecision(False, None, None, {})
    if config.criterion == "cmi-heuristic":
        return criterion_cmi_heuristic(state, cand, epsilon=config.epsilon)
    if config.criterion == "cmi-permutation":
        return criterion_cmi_permutation(
            state, cand, permutations=config.permutations,
            theta=config.theta, seed=config.seed)
    if config.criterion == "mi-permutation":
        return criterion_mi_permutation(
            state, cand, permutations=config.permutations,
            theta=config.theta, seed=config.seed)
    if config.criterion == "dmi-chi2":
        return criterion_delta_mi_chi2(state, cand, discretized, theta=config.theta)
    raise ValueError(f"unknown criterion {config.criterion!r}")


def greedy_select(d: Dataset, config: SelectionConfig) -> SelectionTrace:
    """Run greedy forward selection on a dataset under a config.

    Each step scores every remaining feature, tests the best one with the
    configured criterion, and either commits it (recording its MI and the
    residual CMI, which satisfy mi + cmi = full-set MI exactly) or stops
    and discards it.
    """
    state = prepare_state(d, config.alpha)
    discretized = (
        discretize_equal_frequency(d, config.chi2_bins)
        if config.criterion == "dmi-chi2"
        else None
    )
    cap = config.max_features if config.max_features is not None else d.F
    steps: list[SelectionStep] = []
    stop_reason, final_decision, rejected = "exhausted", None, None
    while state.remaining:
        if len(state.selected) >= cap:
            stop_reason = "max-features"
            break
        cand = best_candidate(state)
        decision = _evaluate_criterion(state, cand, config, discretized)
        if decision.stop:
            stop_reason = config.criterion
            final_decision = decision
            rejected = cand
            break
        mi = candidate_mi(state, cand)
        steps.append(
            SelectionStep(
                index=cand,
                name=state.dataset.feature_names[cand],
                mi=mi,
                cmi=state.full_mi - mi,
                statistic=decision.statistic,
                threshold=decision.threshold,
                detail=decision.detail,
            )
        )
        state.selected.append(cand)
        state.remaining.remove(cand)
        state.cached_selected_gram = GramMatrix(
            state.cached_selected_gram.unit * state.single_grams[cand].unit
        )
        state.scores = {}
    return SelectionTrace(steps, stop_reason, state.full_mi, final_decision, rejected)
