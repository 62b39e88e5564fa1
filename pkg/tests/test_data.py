import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renyi_select.data import (
    Dataset,
    dataset_from_arrays,
    discretize_equal_frequency,
    load_csv,
    save_csv,
    standardize,
    subsample,
)
from renyi_select.errors import (
    EmptyDataset,
    MaxSamplesBelowClassCount,
    MissingFile,
    MissingLabelColumn,
    ParseError,
)


class TestLoadCsv:
    def test_basic_parse(self, tiny_csv):
        d = load_csv(tiny_csv, "label")
        assert (d.n, d.F, d.C) == (4, 2, 2)
        assert d.feature_names == ("f1", "f2")
        np.testing.assert_array_equal(d.labels, [0, 0, 1, 1])
        np.testing.assert_allclose(d.features[:, 0], [1, 2, 3, 4])

    def test_label_by_index_and_default(self, tiny_csv):
        by_index = load_csv(tiny_csv, 2)
        by_default = load_csv(tiny_csv)
        np.testing.assert_array_equal(by_index.labels, by_default.labels)
        assert by_index.feature_names == ("f1", "f2")

    def test_header_only_is_empty(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("a,b,label\n")
        with pytest.raises(EmptyDataset):
            load_csv(p)

    def test_parse_error_locates_cell(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("a,b,label\n1,2,x\n1,abc,y\n")
        with pytest.raises(ParseError) as err:
            load_csv(p)
        assert err.value.row == 2
        assert err.value.column == "b"

    def test_non_finite_rejected(self, tmp_path):
        p = tmp_path / "inf.csv"
        p.write_text("a,label\nnan,x\n")
        with pytest.raises(ParseError):
            load_csv(p)

    def test_missing_file(self):
        with pytest.raises(MissingFile):
            load_csv("/nonexistent/file.csv")

    def test_missing_label_column(self, tiny_csv):
        with pytest.raises(MissingLabelColumn):
            load_csv(tiny_csv, "nope")
        with pytest.raises(MissingLabelColumn):
            load_csv(tiny_csv, 17)

    def test_first_appearance_label_codes(self, tmp_path):
        p = tmp_path / "codes.csv"
        p.write_text("a,label\n1,z\n2,q\n3,z\n4,m\n")
        d = load_csv(p)
        np.testing.assert_array_equal(d.labels, [0, 1, 0, 2])
        assert d.label_names == ("z", "q", "m")

    def test_round_trip_bit_identical(self, tmp_path):
        rng = np.random.default_rng(3)
        feats = np.round(rng.uniform(-5, 5, size=(17, 3)), 4)
        feats[0, 0] = 0.1  # not exactly representable; repr round-trips it
        d = dataset_from_arrays(feats, rng.integers(0, 3, size=17).tolist())
        path = tmp_path / "rt.csv"
        save_csv(d, path)
        d2 = load_csv(path)
        assert np.array_equal(d.features, d2.features)  # bitwise
        np.testing.assert_array_equal(d.labels, d2.labels)


class TestStandardize:
    def test_reference_column(self):
        d = dataset_from_arrays([[1.0], [2.0], [3.0]], [0, 0, 1])
        s = standardize(d)
        np.testing.assert_allclose(
            s.features[:, 0], [-1.224745, 0.0, 1.224745], atol=1e-6
        )

    def test_constant_column_maps_to_zero(self):
        d = dataset_from_arrays([[5.0, 1.0], [5.0, 2.0], [5.0, 3.0]], [0, 1, 0])
        s = standardize(d)
        np.testing.assert_array_equal(s.features[:, 0], [0.0, 0.0, 0.0])

    def test_idempotent(self):
        rng = np.random.default_rng(0)
        d = dataset_from_arrays(rng.uniform(-10, 10, (40, 4)), rng.integers(0, 2, 40))
        once = standardize(d)
        twice = standardize(once)
        np.testing.assert_allclose(twice.features, once.features, atol=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(-1e4, 1e4), min_size=2, max_size=60))
    def test_moments(self, values):
        d = dataset_from_arrays(np.array(values)[:, None], [0] * len(values))
        s = standardize(d)
        col = s.features[:, 0]
        if np.std(values) == 0:
            assert np.all(col == 0.0)
        else:
            assert abs(col.mean()) < 1e-10
            assert abs(col.std() - 1.0) < 1e-10


class TestDiscretize:
    def test_median_split(self):
        d = dataset_from_arrays([[1.0], [2.0], [3.0], [4.0]], [0, 0, 1, 1])
        view = discretize_equal_frequency(d, 2)
        np.testing.assert_array_equal(view.columns[:, 0], [0, 0, 1, 1])
        assert view.cardinalities == (2,)
        assert view.label_cardinality == 2

    def test_constant_column(self):
        d = dataset_from_arrays([[7.0]] * 5, [0, 1, 0, 1, 0])
        view = discretize_equal_frequency(d, 4)
        np.testing.assert_array_equal(view.columns[:, 0], [0] * 5)
        assert view.cardinalities == (1,)

    def test_ties_share_lower_bin(self):
        d = dataset_from_arrays([[1.0], [1.0], [1.0], [2.0]], [0, 0, 1, 1])
        view = discretize_equal_frequency(d, 2)
        np.testing.assert_array_equal(view.columns[:, 0], [0, 0, 0, 1])

    def test_codes_within_cardinalities(self):
        rng = np.random.default_rng(5)
        d = dataset_from_arrays(rng.integers(0, 4, (30, 3)).astype(float),
                                rng.integers(0, 2, 30))
        view = discretize_equal_frequency(d, 5)
        for j in range(3):
            assert view.columns[:, j].min() >= 0
            assert view.columns[:, j].max() < view.cardinalities[j]
            assert view.cardinalities[j] <= min(5, len(np.unique(d.features[:, j])))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 7), st.integers(8, 50), st.integers(0, 2**31))
    def test_distinct_values_balanced(self, bins, n, seed):
        rng = np.random.default_rng(seed)
        col = rng.permutation(n).astype(float)  # all distinct
        d = dataset_from_arrays(col[:, None], [0] * n)
        view = discretize_equal_frequency(d, bins)
        occupancy = np.bincount(view.columns[:, 0], minlength=view.cardinalities[0])
        assert occupancy.max() - occupancy.min() <= 1


class TestSubsample:
    def _balanced(self, n):
        rng = np.random.default_rng(1)
        labels = np.arange(n) % 2
        return dataset_from_arrays(rng.standard_normal((n, 2)), labels)

    def test_identity_when_small(self):
        d = self._balanced(500)
        assert subsample(d, 1000, seed=7) is d

    def test_stratified_counts(self):
        d = self._balanced(2000)
        s = subsample(d, 1000, seed=7)
        assert s.n == 1000
        assert np.bincount(s.labels).tolist() == [500, 500]

    def test_deterministic(self):
        d = self._balanced(2000)
        a = subsample(d, 1000, seed=7)
        b = subsample(d, 1000, seed=7)
        assert np.array_equal(a.features, b.features)
        c = subsample(d, 1000, seed=8)
        assert not np.array_equal(a.features, c.features)

    def test_every_class_survives(self):
        rng = np.random.default_rng(2)
        labels = np.zeros(1000, dtype=int)
        labels[:3] = [1, 2, 2]  # very rare classes
        d = dataset_from_arrays(rng.standard_normal((1000, 2)), labels)
        s = subsample(d, 10, seed=0)
        assert s.C == 3
        assert s.n == 10

    def test_max_samples_below_class_count(self):
        d = dataset_from_arrays(np.eye(4), [0, 1, 2, 3])
        with pytest.raises(MaxSamplesBelowClassCount):
            subsample(d, 3, seed=0)


def test_dataset_validates_labels_dense():
    with pytest.raises(ValueError):
        Dataset(np.zeros((3, 1)), np.array([0, 2, 2]), ("a",), ("x", "y"))
