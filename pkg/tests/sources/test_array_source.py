"""
Tests for the in-memory sample source.
"""
import numpy as np
import pytest

from firecast.models.sample import SampleIndex
from firecast.sources.array_source import ArraySampleSource
from firecast.utils.errors import SampleError, ShapeError


class TestArraySampleSource:
    def setup_method(self):
        self.features = np.random.default_rng(0).normal(size=(5, 3, 2, 3, 3))
        self.labels = np.array([0, 1, 0, 0, 1])
        self.source = ArraySampleSource(self.features, self.labels)

    def test_spec_from_shape(self):
        assert self.source.spec.ts == 3
        assert self.source.spec.r == 1
        assert self.source.spec.k == 9
        assert self.source.n_features == 2
        assert len(self.source) == 5

    def test_indices_carry_labels(self):
        assert [i.label for i in self.source.indices()] == [0, 1, 0, 0, 1]

    def test_batch(self):
        indices = self.source.indices()[1:4]

        features, labels = self.source.batch(indices)

        assert np.array_equal(features, self.features[1:4])
        assert labels.tolist() == [1.0, 0.0, 0.0]

    def test_empty_batch(self):
        features, labels = self.source.batch([])

        assert features.shape == (0, 3, 2, 3, 3)
        assert labels.shape == (0,)

    def test_batches_chunking(self):
        chunks = self.source.batches(self.source.indices(), 2)

        assert [len(c) for c in chunks] == [2, 2, 1]

    def test_out_of_range_index(self):
        with pytest.raises(SampleError):
            self.source.features(SampleIndex(lat_idx=0, lon_idx=0, t_idx=5, label=0))

    def test_labels_must_be_binary(self):
        with pytest.raises(SampleError):
            ArraySampleSource(self.features, np.array([0, 2, 0, 0, 1]))

    def test_even_window_rejected(self):
        with pytest.raises(ShapeError):
            ArraySampleSource(np.zeros((2, 1, 1, 2, 2)), np.zeros(2))

    def test_label_count_checked(self):
        with pytest.raises(ShapeError):
            ArraySampleSource(self.features, np.zeros(4))

    def test_sample_has_graph(self):
        sample = self.source.sample(self.source.indices()[1])

        assert sample.label == 1
        assert sample.graph.n == 9
