"""Normalized positive-definite Gram matrices and their Hadamard products.

A GramMatrix represents the trace-one matrix A with A_ij =
(1/n) k(x_i, x_j) / sqrt(k(x_i,x_i) k(x_j,x_j)). Internally the entries
are stored at unit-diagonal scale (n * A), because entrywise products of
many trace-one matrices underflow: the raw product has trace n^(1-k).
Products of unit-diagonal matrices keep diagonal exactly 1, and dividing
the accumulated product by n recovers the trace-normalized result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonPositiveBandwidth


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Symmetric kernel matrix stored at unit-diagonal scale.

    Attributes:
        unit: (n, n) symmetric float array with unit diagonal and entries
            in [0, 1]; the normalized trace-one matrix is unit / n.
    """

    unit: np.ndarray

    @property
    def n(self) -> int:
        return self.unit.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """The trace-one matrix itself (diagonal 1/n). Allocates a copy."""
        return self.unit / self.n

    def validate(self, atol: float = 1e-12) -> None:
        """Check the normalized-Gram invariants; raises AssertionError."""
        a = self.entries
        n = self.n
        assert np.allclose(a, a.T, atol=atol), "not symmetric"
        assert np.allclose(np.diag(a), 1.0 / n, atol=atol), "diagonal != 1/n"
        assert abs(np.trace(a) - 1.0) < 1e-10, "trace != 1"
        assert a.min() >= -atol and a.max() <= 1.0 / n + atol, "entries outside [0, 1/n]"


def median_bandwidth(column) -> float:
    """Median of the pairwise absolute differences of a 1-D sample.

    Falls back to 1.0 when there are fewer than two points or the median
    distance is zero (e.g. a constant column).
    """
    col = np.asarray(column, dtype=float).ravel()
    n = col.size
    if n < 2:
        return 1.0
    diff = np.abs(col[:, None] - col[None, :])
    iu = np.triu_indices(n, k=1)
    med = float(np.median(diff[iu]))
    return med if med > 0.0 else 1.0


def gram_gaussian(column, sigma: float) -> GramMatrix:
    """Gaussian-kernel Gram matrix of a scalar feature column.

    k(a, b) = exp(-(a-b)^2 / (2 sigma^2)); since k(a, a) = 1 the
    normalized matrix is simply K / n.

    Raises:
        NonPositiveBandwidth: sigma <= 0.
    """
    if sigma <= 0.0:
        raise NonPositiveBandwidth(f"sigma must be positive, got {sigma}")
    col = np.asarray(column, dtype=float).ravel()
    diff = col[:, None] - col[None, :]
    unit = np.exp(diff * diff / (-2.0 * sigma * sigma))
    np.fill_diagonal(unit, 1.0)
    return GramMatrix(unit)


def gram_delta(labels) -> GramMatrix:
    """Delta-kernel Gram matrix of an integer label vector.

    k(a, b) = 1 if a == b else 0. The eigenvalues of the normalized
    matrix are exactly the class proportions (one per class) plus zeros.
    """
    labs = np.asarray(labels).ravel()
    unit = (labs[:, None] == labs[None, :]).astype(float)
    return GramMatrix(unit)


def hadamard_normalized(grams) -> GramMatrix:
    """Trace-normalized entrywise product of Gram matrices.

    Accumulates at unit-diagonal scale, which is algebraically identical
    to dividing the raw Hadamard product by its trace but immune to the
    n^(1-k) underflow. A single input is returned unchanged.

    Raises:
        DimensionMismatch: inputs differ in dimension (or the list is empty).
    """
    grams = list(grams)
    if not grams:
        raise DimensionMismatch("need at least one Gram matrix")
    n = grams[0].n
    for g in grams[1:]:
        if g.n != n:
            raise DimensionMismatch(f"dimension mismatch: {g.n} != {n}")
    if len(grams) == 1:
        return grams[0]
    unit = grams[0].unit.copy()
    for g in grams[1:]:
        unit *= g.unit
    return GramMatrix(unit)
