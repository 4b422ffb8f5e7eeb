"""In-memory SampleSource for tests and toy problems."""

from typing import List, Optional

import numpy as np

from firecast.models.cube import CellTime
from firecast.models.sample import GridGraph, Sample, SampleIndex, SampleSpec
from firecast.services.grid_graph import build_grid_graph
from firecast.utils.errors import SampleError, ShapeError

from .sample_source import SampleSource


class ArraySampleSource(SampleSource):
    """Samples held as a [N][ts][F][G][G] array.

    A SampleIndex addresses row ``t_idx``; lat/lon indices are ignored.
    """

    def __init__(self, features: np.ndarray, labels: np.ndarray, h: int = 1, k: Optional[int] = None):
        features = np.asarray(features, dtype=np.float64)
        labels = np.asarray(labels).astype(np.int64)
        if features.ndim != 5 or features.shape[3] != features.shape[4] or features.shape[3] % 2 == 0:
            raise ShapeError("features must be [N][ts][F][G][G] with odd G", shapes={"features": features.shape})
        if labels.shape != (features.shape[0],):
            raise ShapeError("one label per sample required", shapes={"features": features.shape, "labels": labels.shape})
        if np.any((labels != 0) & (labels != 1)):
            raise SampleError("labels must be 0 or 1")
        r = features.shape[3] // 2
        n_vertices = features.shape[3] ** 2
        self._features = features
        self._labels = labels
        self._spec = SampleSpec(ts=features.shape[1], h=h, r=r, k=min(k or 9, n_vertices))

    @property
    def spec(self) -> SampleSpec:
        return self._spec

    @property
    def n_features(self) -> int:
        return self._features.shape[2]

    @property
    def graph(self) -> GridGraph:
        return build_grid_graph(self._spec.r, self._spec.k)

    def __len__(self) -> int:
        return self._features.shape[0]

    def indices(self) -> List[SampleIndex]:
        """One reference per stored sample, in row order."""
        return [
            SampleIndex(lat_idx=0, lon_idx=0, t_idx=i, label=int(label))
            for i, label in enumerate(self._labels)
        ]

    def features(self, index: SampleIndex) -> np.ndarray:
        if not 0 <= index.t_idx < len(self):
            raise SampleError(f"sample {index.t_idx} not in source of {len(self)}")
        return self._features[index.t_idx]

    def sample(self, index: SampleIndex) -> Sample:
        return Sample(
            features=self.features(index),
            graph=self.graph,
            label=int(self._labels[index.t_idx]),
            origin=CellTime(lat_idx=0, lon_idx=0, t_idx=index.t_idx, year=0, period=0),
        )
