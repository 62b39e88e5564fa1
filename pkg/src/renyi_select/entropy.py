"""Matrix-spectrum Renyi entropy, joint entropy, MI and CMI (in bits).

The alpha-order entropy of a trace-one Gram matrix A is
S_alpha(A) = log2(sum_i lambda_i(A)^alpha) / (1 - alpha); joint entropy
of several variables applies the same functional to the trace-normalized
Hadamard product of their Gram matrices. Mutual information and
conditional mutual information are the usual three- and four-term
entropy combinations evaluated with these quantities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EigensolverFailure, NegativeEigenvalue
from .kernels import GramMatrix, hadamard_normalized

# Eigenvalues in [-CLAMP_BAND, 0) are treated as round-off and clamped to
# zero; anything below -CLAMP_BAND means the input was not PSD.
CLAMP_BAND = 1e-8


@dataclass(frozen=True)
class Alpha:
    """Entropy order; positive and bounded away from 1 (where the
    functional is undefined). Use 1.01 to approximate the Shannon limit."""

    value: float = 1.01

    def __post_init__(self):
        if not (self.value > 0.0):
            raise ValueError(f"alpha must be positive, got {self.value}")
        if abs(self.value - 1.0) < 1e-6:
            raise ValueError("alpha must differ from 1 by at least 1e-6")


def _as_alpha(alpha) -> Alpha:
    return alpha if isinstance(alpha, Alpha) else Alpha(float(alpha))


@dataclass(frozen=True)
class Eigenspectrum:
    """Non-increasing, non-negative eigenvalues summing to one."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.sort(np.asarray(self.values, dtype=float))[::-1]
        object.__setattr__(self, "values", vals)
        if vals.size and vals[-1] < 0.0:
            raise NegativeEigenvalue(f"negative eigenvalue {vals[-1]}")
        if abs(vals.sum() - 1.0) > 1e-8:
            raise ValueError(f"spectrum sums to {vals.sum()}, not 1")

    @property
    def n(self) -> int:
        return self.values.size


def eigenspectrum(a: GramMatrix) -> Eigenspectrum:
    """Eigenvalues of a normalized Gram matrix, clamped and renormalized.

    Values in [-1e-8, 0) are set to zero (round-off) and the spectrum is
    rescaled to sum exactly one.

    Raises:
        EigensolverFailure: the symmetric eigensolver did not converge.
        NegativeEigenvalue: an eigenvalue below -1e-8 (broken input).
    """
    lam = _eigvals_unit(a.unit) / a.n
    return Eigenspectrum(_clean_spectrum(lam))


def _eigvals_unit(unit: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.eigvalsh(unit)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc


def _clean_spectrum(lam: np.ndarray) -> np.ndarray:
    low = lam.min() if lam.size else 0.0
    if low < -CLAMP_BAND:
        raise NegativeEigenvalue(f"eigenvalue {low} below -{CLAMP_BAND}")
    lam = np.where(lam < 0.0, 0.0, lam)
    return lam / lam.sum()


def renyi_entropy(spec: Eigenspectrum, alpha) -> float:
    """Alpha-order entropy of an eigenspectrum, in bits.

    Zero eigenvalues contribute nothing; the result lies in [0, log2 n].
    """
    alpha = _as_alpha(alpha)
    lam = spec.values[spec.values > 0.0]
    s = float(np.log2(np.sum(lam**alpha.value)) / (1.0 - alpha.value))
    return min(max(s, 0.0), float(np.log2(spec.n)))


def joint_entropy(grams, alpha) -> float:
    """Joint entropy of several variables: the entropy of the
    trace-normalized Hadamard product of their Gram matrices."""
    return renyi_entropy(eigenspectrum(hadamard_normalized(grams)), alpha)


def mutual_information(label_gram: GramMatrix, feature_grams, alpha) -> float:
    """MI between a label Gram matrix B and a feature group:
    S(B) + S(joint of features) - S(joint of features and B)."""
    feature_grams = list(feature_grams)
    return (
        joint_entropy([label_gram], alpha)
        + joint_entropy(feature_grams, alpha)
        - joint_entropy(feature_grams + [label_gram], alpha)
    )


def conditional_mutual_information(c_grams, label_gram: GramMatrix, a_grams, alpha) -> float:
    """CMI between a feature group C and labels B given a group A:
    S(A.C) + S(B.A) - S(A.B.C) - S(A), where "." is the trace-normalized
    Hadamard product. With empty A this reduces to MI(B; C). The value is
    an estimate and is returned unclamped (it may be slightly negative).
    """
    c_grams = list(c_grams)
    a_grams = list(a_grams)
    if not c_grams:
        raise ValueError("c_grams must be non-empty")
    if not a_grams:
        return mutual_information(label_gram, c_grams, alpha)
    return (
        joint_entropy(a_grams + c_grams, alpha)
        + joint_entropy([label_gram] + a_grams, alpha)
        - joint_entropy(a_grams + [label_gram] + c_grams, alpha)
        - joint_entropy(a_grams, alpha)
    )


# --- internal fast paths -------------------------------------------------
#
# The selection loop evaluates thousands of entropies of unit-diagonal
# products. These helpers skip GramMatrix wrappers, and exploit that a
# product masked by a delta-kernel label matrix is block-diagonal under
# the class partition, so its spectrum is the union of the class-block
# spectra (an exact identity that cuts the eigensolve cost roughly by the
# number of classes squared).


def entropy_of_unit(unit: np.ndarray, alpha: Alpha) -> float:
    """Entropy of a unit-diagonal kernel matrix (normalized by its size)."""
    lam = _clean_spectrum(_eigvals_unit(unit) / unit.shape[0])
    lam = lam[lam > 0.0]
    s = float(np.log2(np.sum(lam**alpha.value)) / (1.0 - alpha.value))
    return min(max(s, 0.0), float(np.log2(unit.shape[0])))


def entropy_of_unit_label_masked(unit: np.ndarray, class_groups, alpha: Alpha) -> float:
    """Entropy of (unit * delta(labels)) / n via per-class diagonal blocks.

    class_groups holds the row indices of each class; the masked matrix
    is block-diagonal under that partition, so eigenvalues are gathered
    block by block.
    """
    n = unit.shape[0]
    lam = np.concatenate(
        [_eigvals_unit(unit[np.ix_(g, g)]) for g in class_groups]
    )
    lam = _clean_spectrum(lam / n)
    lam = lam[lam > 0.0]
    s = float(np.log2(np.sum(lam**alpha.value)) / (1.0 - alpha.value))
    return min(max(s, 0.0), float(np.log2(n)))
