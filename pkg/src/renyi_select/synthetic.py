"""Seeded synthetic dataset generators used by tests, benchmarks and the
bundled example data."""

from __future__ import annotations

import numpy as np

from .data import Dataset, dataset_from_arrays


def make_linear_binary(
    n: int,
    informative: int = 5,
    noise: int = 15,
    seed: int = 0,
    label_noise: float = 0.5,
) -> Dataset:
    """Binary labels linearly driven by the first `informative` features.

    The informative features are iid standard normals combined with
    decreasing weights; the label is the sign of that combination plus
    Gaussian noise. The remaining `noise` features are independent
    standard normals carrying no label information.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed % 2**64))
    x_inf = rng.standard_normal((n, informative))
    weights = np.linspace(2.0, 0.8, informative)
    logits = x_inf @ weights + label_noise * rng.standard_normal(n)
    labels = (logits > 0).astype(int)
    x_noise = rng.standard_normal((n, noise))
    features = np.concatenate([x_inf, x_noise], axis=1)
    names = [f"inf{j}" for j in range(informative)] + [f"noise{j}" for j in range(noise)]
    return dataset_from_arrays(features, labels, names)


def make_waveform(n: int, seed: int = 0) -> Dataset:
    """Three-class waveform data: 21 features, each class a random convex
    combination of two of three triangular base waves plus unit noise.

    This is the classic CART waveform generator; features are strongly
    correlated within a class and all carry some label information.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed % 2**64))
    grid = np.arange(1, 22, dtype=float)
    h1 = np.maximum(6.0 - np.abs(grid - 7.0), 0.0)
    h2 = np.maximum(6.0 - np.abs(grid - 15.0), 0.0)
    h3 = np.maximum(6.0 - np.abs(grid - 11.0), 0.0)
    pairs = [(h1, h2), (h1, h3), (h2, h3)]
    labels = rng.integers(0, 3, size=n)
    u = rng.uniform(size=n)
    features = np.empty((n, 21))
    for i in range(n):
        a, b = pairs[labels[i]]
        features[i] = u[i] * a + (1.0 - u[i]) * b + rng.standard_normal(21)
    names = [f"x{j + 1}" for j in range(21)]
    return dataset_from_arrays(features, labels, names)
