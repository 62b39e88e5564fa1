import numpy as np
import pytest

from renyi_select.data import dataset_from_arrays
from renyi_select.kernels import gram_gaussian, median_bandwidth


@pytest.fixture
def tiny_csv(tmp_path):
    path = tmp_path / "tiny.csv"
    path.write_text("f1,f2,label\n1,0,a\n2,0,a\n3,1,b\n4,1,b\n")
    return str(path)


def random_dataset(rng, n, F, C=2):
    """Random continuous features with random labels."""
    feats = rng.standard_normal((n, F))
    labels = rng.integers(0, C, size=n)
    labels[:C] = np.arange(C)  # ensure every class appears
    return dataset_from_arrays(feats, labels)


def random_gaussian_grams(rng, n, k):
    """k Gaussian-kernel grams over independent random columns."""
    grams = []
    for _ in range(k):
        col = rng.standard_normal(n)
        grams.append(gram_gaussian(col, median_bandwidth(col)))
    return grams
