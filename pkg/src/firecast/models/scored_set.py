"""Scored set model with pydantic validation."""

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator


class ScoredSet(BaseModel):
    """Parallel arrays of scores and 0/1 labels."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    scores: np.ndarray
    labels: np.ndarray

    @model_validator(mode="after")
    def _check(self) -> "ScoredSet":
        if self.scores.ndim != 1 or self.scores.shape != self.labels.shape:
            raise ValueError(f"scores {self.scores.shape} and labels {self.labels.shape} must be equal-length vectors")
        if not np.all(np.isfinite(self.scores)):
            raise ValueError("scores must be finite")
        if np.any((self.labels != 0) & (self.labels != 1)):
            raise ValueError("labels must be 0 or 1")
        return self

    @classmethod
    def from_arrays(cls, scores, labels) -> "ScoredSet":
        return cls(
            scores=np.asarray(scores, dtype=np.float64).reshape(-1),
            labels=np.asarray(labels).astype(np.int64).reshape(-1),
        )

    @property
    def n_pos(self) -> int:
        return int(self.labels.sum())

    @property
    def n_neg(self) -> int:
        return int(self.labels.size - self.labels.sum())

    def __len__(self) -> int:
        return int(self.labels.size)
