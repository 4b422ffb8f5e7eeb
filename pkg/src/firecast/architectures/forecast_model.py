"""Abstract ForecastModel interface.

This module defines the contract every forecasting architecture
implements, so training, evaluation and map export never depend on a
concrete network.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel

from firecast.models.sample import GridGraph
from firecast.nn.params import ParamStore
from firecast.nn.tensor import Tensor
from firecast.utils.errors import ShapeError


class ForecastModel(ABC):
    """Maps a batch of feature tensors to fire probabilities.

    Parameters are created at construction from the stream
    ``np.random.default_rng([seed, 1])`` and live in ``self.store``.
    """

    architecture: str = ""

    def __init__(self, config: BaseModel, n_features: int, seed: int = 0):
        if n_features < 1:
            raise ShapeError(f"n_features must be positive, got {n_features}")
        self.config = config
        self.n_features = n_features
        self.seed = seed
        self.store = ParamStore()
        self.build(np.random.default_rng([seed, 1]))

    @abstractmethod
    def build(self, rng: np.random.Generator) -> None:
        """Register all parameters in ``self.store``."""
        pass

    @abstractmethod
    def forward(
        self,
        features: np.ndarray,
        graph: Optional[GridGraph] = None,
        training: bool = False,
        rng: Optional[np.random.Generator] = None,
    ) -> Tensor:
        """Scores for a batch.

        Args:
            features: [B][ts][F][G][G] feature array.
            graph: Grid-graph of the window (needed by graph models).
            training: Enables dropout where the architecture has it.
            rng: Dropout stream.

        Returns:
            Tensor: scores in (0, 1), shape [B].

        Raises:
            ShapeError: If features do not fit the architecture.
        """
        pass

    def predict(self, features: np.ndarray, graph: Optional[GridGraph] = None) -> np.ndarray:
        """Evaluation-mode scores as a float64 array [B]."""
        return np.array(self.forward(features, graph=graph, training=False).data, dtype=np.float64)

    def describe(self) -> Dict[str, Any]:
        """Architecture name, config and feature count, as stored in model.json."""
        return {
            "architecture": self.architecture,
            "config": self.config.model_dump(),
            "n_features": self.n_features,
            "seed": self.seed,
        }

    def _check_features(self, features: np.ndarray, grid_size: int) -> np.ndarray:
        features = np.asarray(features, dtype=np.float64)
        if (
            features.ndim != 5
            or features.shape[2] != self.n_features
            or features.shape[3] != grid_size
            or features.shape[4] != grid_size
        ):
            raise ShapeError(
                f"{self.architecture}: expected features [B][ts][{self.n_features}][{grid_size}][{grid_size}]",
                shapes={"features": features.shape},
            )
        return features
