"""Bootstrap classification evaluation and criterion-ranking statistics.

A selected feature subset is scored by out-of-bag bootstrap accuracy of
an L2-regularized hinge-loss linear classifier (one-vs-rest for more
than two classes) trained by seeded per-sample subgradient descent with
step 1/(lambda t). The "optimal" subset size of an accuracy curve is the
smallest size statistically indistinguishable from the best one (paired
t-test), and criteria are compared across datasets with competition
ranks and the Wilcoxon rank-sum test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, erfc, sqrt

import numpy as np
from scipy import special as sp_special

from ._parallel import parallel_map
from .data import Dataset
from .errors import (
    EmptyFeatureSubset,
    EmptyInput,
    LengthMismatch,
    TooFewSamples,
)


@dataclass(frozen=True)
class LinearModel:
    """One-vs-rest linear classifier.

    weights has one row per class, each of length n_features + 1 (bias
    last). A model trained on a single-class sample is flagged and
    predicts that class constantly.
    """

    weights: np.ndarray
    single_class: bool = False

    def decision_values(self, features: np.ndarray) -> np.ndarray:
        aug = np.hstack([features, np.ones((features.shape[0], 1))])
        return aug @ self.weights.T

    def predict(self, features: np.ndarray) -> np.ndarray:
        return np.argmax(self.decision_values(features), axis=1)


def train_linear(
    features,
    labels,
    epochs: int = 50,
    regularization: float = 1e-3,
    seed: int = 0,
) -> LinearModel:
    """Train the hinge-loss linear model on (already standardized) data.

    Per-sample subgradient descent with a global step counter t and step
    size 1/(regularization * t); samples are reshuffled every epoch from
    a per-class seeded stream, so the model is deterministic for a fixed
    seed. A single-class sample yields a flagged constant predictor.
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray(labels, dtype=np.int64)
    n, k = X.shape
    n_classes = int(y.max()) + 1 if y.size else 1
    if np.unique(y).size < 2:
        weights = np.zeros((n_classes, k + 1))
        weights[y[0], k] = 1.0  # bias pushes every score toward this class
        return LinearModel(weights, single_class=True)
    aug = np.hstack([X, np.ones((n, 1))])
    lam = regularization
    weights = np.zeros((n_classes, k + 1))
    for c in range(n_classes):
        rng = np.random.default_rng(np.random.SeedSequence((seed % 2**64, c)))
        target = np.where(y == c, 1.0, -1.0)
        w = np.zeros(k + 1)
        t = 0
        for _ in range(epochs):
            for i in rng.permutation(n):
                t += 1
                eta = 1.0 / (lam * t)
                if target[i] * (aug[i] @ w) < 1.0:
                    w *= 1.0 - eta * lam
                    w += eta * target[i] * aug[i]
                else:
                    w *= 1.0 - eta * lam
        weights[c] = w
    return LinearModel(weights)


@dataclass(frozen=True)
class BootstrapResult:
    """Accuracies of the bootstrap runs for one feature subset, with the
    normal-approximation 95% confidence interval of the mean."""

    run_accuracies: tuple[float, ...]
    mean: float
    ci_low: float
    ci_high: float
    n_features: int

    @property
    def runs(self) -> int:
        return len(self.run_accuracies)


def bootstrap_accuracy(
    d: Dataset,
    feature_subset,
    runs: int = 100,
    seed: int = 0,
    epochs: int = 50,
    regularization: float = 1e-3,
) -> BootstrapResult:
    """Out-of-bag bootstrap accuracy of the linear model on a subset.

    Each run draws n training rows with replacement (stream keyed by
    (seed, run)); the untouched rows form the test set. Features are
    standardized with the training split's statistics. A run whose
    out-of-bag set is empty is redrawn with the next sub-seed; a
    single-class training sample falls back to the constant predictor.

    Raises:
        EmptyFeatureSubset: no features given.
    """
    subset = list(feature_subset)
    if not subset:
        raise EmptyFeatureSubset("feature_subset must be non-empty")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    X = d.features[:, subset]
    y = d.labels
    n = d.n

    def one_run(r: int) -> float:
        for attempt in range(1000):
            rng = np.random.default_rng(
                np.random.SeedSequence((seed % 2**64, r, attempt))
            )
            idx = rng.integers(0, n, size=n)
            mask = np.ones(n, dtype=bool)
            mask[idx] = False
            oob = np.flatnonzero(mask)
            if oob.size:
                break
        else:  # pragma: no cover - probability ~ (n!/n^n)^1000
            raise RuntimeError("could not draw a bootstrap sample with out-of-bag rows")
        X_tr, y_tr = X[idx], y[idx]
        mean = X_tr.mean(axis=0)
        std = X_tr.std(axis=0)
        std = np.where(std == 0.0, 1.0, std)
        model = train_linear(
            (X_tr - mean) / std,
            y_tr,
            epochs=epochs,
            regularization=regularization,
            seed=int(rng.integers(2**63)),
        )
        pred = model.predict((X[oob] - mean) / std)
        return float(np.mean(pred == y[oob]))

    accs = parallel_map(one_run, range(runs))
    mean = float(np.mean(accs))
    sd = float(np.std(accs, ddof=1)) if runs > 1 else 0.0
    half = 1.96 * sd / sqrt(runs)
    return BootstrapResult(tuple(accs), mean, mean - half, mean + half, len(subset))


def paired_t_test(a, b, significance: float = 0.05) -> tuple[float, bool]:
    """Two-sided paired t-test; returns (p_value, reject).

    All-zero differences give p = 1.0 by convention; zero variance with a
    nonzero mean gives p = 0.0.

    Raises:
        LengthMismatch: samples differ in length.
        TooFewSamples: fewer than two pairs.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise LengthMismatch(f"lengths differ: {a.size} vs {b.size}")
    if a.size < 2:
        raise TooFewSamples("need at least two pairs")
    diff = a - b
    if np.all(diff == 0.0):
        return 1.0, False
    sd = diff.std(ddof=1)
    if sd == 0.0:
        return 0.0, True
    t = diff.mean() / (sd / sqrt(diff.size))
    p = float(2.0 * sp_special.stdtr(diff.size - 1, -abs(t)))
    return p, p < significance


def _midranks(values: np.ndarray) -> np.ndarray:
    """Average ranks (1-based) with ties sharing their mean rank."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=float)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


# Pooled sizes up to this bound use exhaustive enumeration of the group
# assignments; beyond it the tie-corrected, continuity-corrected normal
# approximation takes over.
_EXACT_LIMIT = 14


def wilcoxon_rank_sum(a, b, significance: float = 0.1) -> tuple[float, bool]:
    """Two-sided Wilcoxon rank-sum test with midranks; (p_value, reject).

    Small pooled samples (<= 14 values) are tested exactly by enumerating
    every assignment of the pooled ranks; larger samples use the normal
    approximation with tie correction and a 0.5 continuity correction.

    Raises:
        EmptyInput: either sample is empty.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise EmptyInput("both samples must be non-empty")
    pooled = np.concatenate([a, b])
    ranks = _midranks(pooled)
    na, nn = a.size, pooled.size
    w = ranks[:na].sum()
    mu = na * (nn + 1) / 2.0
    if nn <= _EXACT_LIMIT:
        total = comb(nn, na)
        dev = abs(w - mu) - 1e-12
        count = sum(
            1
            for combo in combinations(range(nn), na)
            if abs(ranks[list(combo)].sum() - mu) >= dev
        )
        p = count / total
    else:
        _, tie_counts = np.unique(pooled, return_counts=True)
        var = (
            na
            * b.size
            / 12.0
            * ((nn + 1) - ((tie_counts**3 - tie_counts).sum()) / (nn * (nn - 1)))
        )
        if var <= 0.0:
            return 1.0, False
        dev = w - mu
        dev -= 0.5 * np.sign(dev)
        p = erfc(abs(dev) / sqrt(var) / sqrt(2.0))
    p = float(min(p, 1.0))
    return p, p < significance


def optimal_feature_count(curve, significance: float = 0.05) -> int:
    """Smallest subset size whose accuracies are statistically
    indistinguishable from the best mean accuracy on the curve.

    Args:
        curve: BootstrapResult per subset size, index i holding size i+1.
        significance: paired t-test level.
    """
    curve = list(curve)
    if not curve:
        raise EmptyInput("curve must be non-empty")
    means = [r.mean for r in curve]
    best = int(np.argmax(means))  # first max on ties
    for s in range(best):
        _, reject = paired_t_test(
            curve[s].run_accuracies, curve[best].run_accuracies, significance
        )
        if not reject:
            return s + 1
    return best + 1


def rank_criteria(stop_counts: dict, optimal: int) -> dict:
    """Competition ranks of criteria by |selected count - optimal|,
    ascending; tied criteria share the lowest applicable rank."""
    if not stop_counts:
        raise EmptyInput("need at least one criterion")
    diffs = {name: abs(count - optimal) for name, count in stop_counts.items()}
    return {
        name: 1 + sum(1 for other in diffs.values() if other < diff)
        for name, diff in diffs.items()
    }


@dataclass
class RankTable:
    """Per-dataset competition ranks for each criterion, with averages."""

    criteria: tuple[str, ...]
    rows: dict = field(default_factory=dict)

    def add_dataset(self, name: str, ranks: dict) -> None:
        self.rows[name] = {c: ranks[c] for c in self.criteria}

    def ranks_of(self, criterion: str) -> list[int]:
        return [row[criterion] for row in self.rows.values()]

    def average_ranks(self) -> dict:
        return {
            c: float(np.mean(self.ranks_of(c))) if self.rows else float("nan")
            for c in self.criteria
        }
