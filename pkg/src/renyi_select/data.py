"""Tabular dataset loading, validation and preprocessing.

A Dataset is a column-oriented numeric feature matrix plus a categorical
label vector. Labels are stored as dense integer codes 0..C-1 assigned in
order of first appearance, with the original label strings kept so a
dataset can be written back to CSV losslessly.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import (
    EmptyDataset,
    MaxSamplesBelowClassCount,
    MissingFile,
    MissingLabelColumn,
    ParseError,
)


@dataclass(frozen=True)
class Dataset:
    """Immutable numeric dataset with integer-coded class labels.

    Attributes:
        features: (n, F) float array, one column per feature.
        labels: (n,) int array with values 0..C-1, dense in order of first
            appearance of the original label values.
        feature_names: F column names.
        label_names: the original label values, indexed by code.
    """

    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    label_names: tuple[str, ...]

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=float)
        labs = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labs)
        if feats.ndim != 2:
            raise ValueError("features must be a 2-D array")
        n, F = feats.shape
        if n < 1:
            raise EmptyDataset("dataset has no rows")
        if labs.shape != (n,):
            raise ValueError("labels length must equal the number of rows")
        if not np.all(np.isfinite(feats)):
            raise ValueError("features must be finite")
        if len(self.feature_names) != F:
            raise ValueError("feature_names length must equal feature count")
        codes = np.unique(labs)
        if not np.array_equal(codes, np.arange(len(codes))):
            raise ValueError("labels must be dense codes 0..C-1")
        if len(self.label_names) != len(codes):
            raise ValueError("label_names length must equal class count")

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def F(self) -> int:
        return self.features.shape[1]

    @property
    def C(self) -> int:
        return len(self.label_names)

    def column(self, j: int) -> np.ndarray:
        return self.features[:, j]


@dataclass(frozen=True)
class DiscretizedView:
    """Integer-coded view of a dataset's features.

    Attributes:
        columns: (n, F) int array; column j holds codes in
            [0, cardinalities[j]).
        cardinalities: per-column number of distinct codes.
        label_cardinality: number of classes C.
    """

    columns: np.ndarray
    cardinalities: tuple[int, ...]
    label_cardinality: int

    def __post_init__(self):
        object.__setattr__(self, "columns", np.asarray(self.columns, dtype=np.int64))


def _make_feature_names(F: int) -> tuple[str, ...]:
    return tuple(f"f{j}" for j in range(F))


def dataset_from_arrays(features, labels, feature_names=None) -> Dataset:
    """Build a Dataset from raw arrays, encoding labels by first appearance.

    Args:
        features: (n, F) array-like of finite numbers.
        labels: length-n sequence of hashable label values.
        feature_names: optional names; defaults to f0..f{F-1}.
    """
    features = np.asarray(features, dtype=float)
    if features.ndim == 1:
        features = features[:, None]
    seen: dict = {}
    codes = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        if lab not in seen:
            seen[lab] = len(seen)
        codes[i] = seen[lab]
    names = tuple(feature_names) if feature_names is not None else _make_feature_names(features.shape[1])
    return Dataset(features, codes, names, tuple(str(k) for k in seen))


def load_csv(path, label_column=None) -> Dataset:
    """Load a UTF-8, comma-delimited, headered CSV into a Dataset.

    Args:
        path: CSV file path.
        label_column: label column selector; a header name, a 0-based
            column index, or None for the last column.

    Raises:
        MissingFile: the path does not exist.
        MissingLabelColumn: the selector matches no column.
        ParseError: a feature cell is not a finite number.
        EmptyDataset: the file has a header but no data rows.
    """
    if not os.path.isfile(path):
        raise MissingFile(f"no such file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDataset(f"{path} is empty") from None
        rows = [r for r in reader if r]

    label_idx = _resolve_label_column(header, label_column)
    if not rows:
        raise EmptyDataset(f"{path} contains no data rows")

    feature_names = tuple(name for j, name in enumerate(header) if j != label_idx)
    n, F = len(rows), len(header) - 1
    features = np.empty((n, F), dtype=float)
    raw_labels = []
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise ParseError(i + 1, header[min(len(row), len(header) - 1)], row)
        k = 0
        for j, cell in enumerate(row):
            if j == label_idx:
                raw_labels.append(cell)
                continue
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(i + 1, header[j], cell) from None
            if not np.isfinite(value):
                raise ParseError(i + 1, header[j], cell)
            features[i, k] = value
            k += 1
    return dataset_from_arrays(features, raw_labels, feature_names)


def bundled_dataset_path(name: str) -> str:
    """Filesystem path of a dataset shipped with the package
    (e.g. "waveform")."""
    path = resources.files("renyi_select.datasets").joinpath(f"{name}.csv")
    if not path.is_file():
        raise MissingFile(f"no bundled dataset named {name!r}")
    return str(path)


def _resolve_label_column(header, label_column) -> int:
    if label_column is None:
        return len(header) - 1
    if isinstance(label_column, str):
        if label_column in header:
            return header.index(label_column)
        if label_column.lstrip("-").isdigit():
            label_column = int(label_column)
        else:
            raise MissingLabelColumn(f"no column named {label_column!r}")
    if isinstance(label_column, int):
        if 0 <= label_column < len(header):
            return label_column
        raise MissingLabelColumn(f"label index {label_column} out of range")
    raise MissingLabelColumn(f"bad label selector {label_column!r}")


def save_csv(d: Dataset, path, label_name: str = "label") -> None:
    """Write a Dataset back to CSV; inverse of load_csv for finite inputs.

    Feature values are written with repr(), which round-trips float64
    exactly, and labels are written as their original strings.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(d.feature_names) + [label_name])
        for i in range(d.n):
            row = [repr(float(v)) for v in d.features[i]]
            row.append(d.label_names[d.labels[i]])
            writer.writerow(row)


def standardize(d: Dataset) -> Dataset:
    """Z-score every feature column (population std); constant columns
    map to all-zeros. Labels are unchanged."""
    mean = d.features.mean(axis=0)
    std = d.features.std(axis=0)
    safe = np.where(std == 0.0, 1.0, std)
    feats = (d.features - mean) / safe
    feats[:, std == 0.0] = 0.0
    return Dataset(feats, d.labels, d.feature_names, d.label_names)


def discretize_equal_frequency(d: Dataset, bins: int) -> DiscretizedView:
    """Equal-frequency (rank-quantile) integer coding of every column.

    Each column is cut at rank quantiles into at most `bins` bins. Tied
    values always share the lower bin, so the effective cardinality can be
    smaller than `bins`; for all-distinct values bin occupancies differ by
    at most one.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    n = d.n
    cols = np.empty((n, d.F), dtype=np.int64)
    cards = []
    for j in range(d.F):
        col = d.features[:, j]
        order = np.argsort(col, kind="stable")
        ranks = np.empty(n, dtype=np.int64)
        ranks[order] = np.arange(n)
        # ties get the rank of their first occurrence so they share a bin
        first_rank: dict = {}
        for idx in order:
            v = col[idx]
            if v not in first_rank:
                first_rank[v] = ranks[idx]
            ranks[idx] = first_rank[v]
        codes = (ranks * bins) // n
        uniq, dense = np.unique(codes, return_inverse=True)
        cols[:, j] = dense
        cards.append(len(uniq))
    return DiscretizedView(cols, tuple(cards), d.C)


def subsample(d: Dataset, max_samples: int, seed: int) -> Dataset:
    """Stratified, seeded subsample to at most max_samples rows.

    Returns d unchanged when it already fits. Otherwise picks per-class
    counts proportional to the class frequencies (largest-remainder
    rounding, at least one row per class) and samples without replacement.
    Row order is preserved.

    Raises:
        MaxSamplesBelowClassCount: max_samples < number of classes.
    """
    if max_samples < d.C:
        raise MaxSamplesBelowClassCount(
            f"max_samples={max_samples} is below the class count {d.C}"
        )
    if d.n <= max_samples:
        return d
    class_indices = [np.flatnonzero(d.labels == c) for c in range(d.C)]
    counts = _largest_remainder_allocation(
        np.array([len(ix) for ix in class_indices]), max_samples
    )
    rng = np.random.default_rng(np.random.SeedSequence(seed % 2**64))
    chosen = []
    for ix, k in zip(class_indices, counts):
        chosen.append(rng.choice(ix, size=k, replace=False))
    keep = np.sort(np.concatenate(chosen))
    return Dataset(
        d.features[keep], d.labels[keep], d.feature_names, d.label_names
    )


def _largest_remainder_allocation(class_sizes: np.ndarray, total: int) -> np.ndarray:
    """Apportion `total` across classes proportionally, each class >= 1."""
    n = class_sizes.sum()
    quota = class_sizes * total / n
    counts = np.maximum(np.floor(quota).astype(int), 1)
    counts = np.minimum(counts, class_sizes)
    # distribute the shortfall by largest fractional part, respecting caps
    while counts.sum() < total:
        frac = np.where(counts < class_sizes, quota - counts, -np.inf)
        counts[int(np.argmax(frac))] += 1
    while counts.sum() > total:
        frac = np.where(counts > 1, quota - counts, np.inf)
        counts[int(np.argmin(frac))] -= 1
    return counts
