"""Abstract SampleSource interface.

This module defines the contract for everything that turns sample
references into model-ready feature tensors, so the trainer and the
evaluator work the same on a datacube or on in-memory arrays.
"""

from abc import ABC, abstractmethod
from typing import List, Optional, Sequence, Tuple

import numpy as np

from firecast.models.sample import GridGraph, Sample, SampleIndex, SampleSpec


class SampleSource(ABC):
    """Abstract interface for sample feature lookup."""

    @property
    @abstractmethod
    def spec(self) -> SampleSpec:
        """Timeseries length, horizon and window radius of every sample."""
        pass

    @property
    @abstractmethod
    def n_features(self) -> int:
        """Feature channels per timestep (drivers plus positional encodings)."""
        pass

    @property
    @abstractmethod
    def graph(self) -> Optional[GridGraph]:
        """Grid-graph shared by all samples, or None if the source has none."""
        pass

    @abstractmethod
    def features(self, index: SampleIndex) -> np.ndarray:
        """Feature tensor of one sample.

        Returns:
            np.ndarray: float64 [ts][F][2r+1][2r+1].

        Raises:
            SampleError: If the sample cannot be built.
        """
        pass

    @abstractmethod
    def sample(self, index: SampleIndex) -> Sample:
        """Full Sample (features, graph, label, origin) of one reference."""
        pass

    def batch(self, indices: Sequence[SampleIndex]) -> Tuple[np.ndarray, np.ndarray]:
        """Stack features and labels of several samples.

        Returns:
            Tuple of features [B][ts][F][G][G] and float64 labels [B].
        """
        features = np.stack([self.features(i) for i in indices]) if indices else np.zeros(
            (0, self.spec.ts, self.n_features, self.spec.grid_size, self.spec.grid_size)
        )
        labels = np.array([i.label for i in indices], dtype=np.float64)
        return features, labels

    def batches(self, indices: Sequence[SampleIndex], batch_size: int) -> List[Sequence[SampleIndex]]:
        """Consecutive chunks of at most batch_size references."""
        return [indices[i:i + batch_size] for i in range(0, len(indices), batch_size)]
