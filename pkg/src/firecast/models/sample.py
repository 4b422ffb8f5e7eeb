"""Sample, graph and split models with pydantic validation."""

from typing import Any, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .cube import CellTime, CubeHeader


class SampleSpec(BaseModel):
    """Timeseries length, horizon, spatial radius and graph degree of a sample."""

    model_config = ConfigDict(frozen=True)

    ts: int = Field(default=12, ge=1, description="Number of input 8-day steps")
    h: int = Field(default=1, ge=1, description="Forecasting horizon in 8-day steps")
    r: int = Field(default=0, ge=0, description="Radius of the spatial window")
    k: int = Field(default=9, ge=1, description="Nearest neighbours per vertex, self included")

    @model_validator(mode="before")
    @classmethod
    def _default_k(cls, data: Any) -> Any:
        # an omitted k never exceeds the window
        if isinstance(data, dict) and "k" not in data:
            r = int(data.get("r", 0))
            data = {**data, "k": min(9, (2 * r + 1) ** 2)}
        return data

    @model_validator(mode="after")
    def _check_k(self) -> "SampleSpec":
        if self.k > self.grid_size ** 2:
            raise ValueError(f"k ({self.k}) exceeds the number of grid vertices ({self.grid_size ** 2})")
        return self

    @property
    def grid_size(self) -> int:
        return 2 * self.r + 1


class GridGraph(BaseModel):
    """Grid-graph of a (2r+1)x(2r+1) window with its normalized adjacency."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    radius: int = Field(..., ge=0)
    k: int = Field(..., ge=1)
    n: int = Field(..., ge=1)
    edges: List[Tuple[int, int]]
    a_hat_norm: np.ndarray
    center_index: int

    @model_validator(mode="after")
    def _check(self) -> "GridGraph":
        if self.a_hat_norm.shape != (self.n, self.n):
            raise ValueError(f"a_hat_norm has shape {self.a_hat_norm.shape}, expected {(self.n, self.n)}")
        if not 0 <= self.center_index < self.n:
            raise ValueError("center_index out of range")
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise ValueError(f"edge ({i}, {j}) must satisfy 0 <= i < j < n")
        return self


class Sample(BaseModel):
    """One model-ready instance: features up to t_c and the label at t_c + h."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    features: np.ndarray = Field(..., description="[ts][F][2r+1][2r+1]")
    graph: Optional[GridGraph] = None
    label: int = Field(..., ge=0, le=1)
    origin: CellTime

    @model_validator(mode="after")
    def _check(self) -> "Sample":
        if self.features.ndim != 4 or self.features.shape[2] != self.features.shape[3]:
            raise ValueError(f"features must be [ts][F][G][G], got {self.features.shape}")
        return self


class SampleIndex(BaseModel):
    """Lightweight reference to a sample: origin cell/time and label."""

    model_config = ConfigDict(frozen=True)

    lat_idx: int = Field(..., ge=0)
    lon_idx: int = Field(..., ge=0)
    t_idx: int = Field(..., ge=0)
    label: int = Field(..., ge=0, le=1)

    def cell_time(self, header: CubeHeader) -> CellTime:
        return header.cell_time(self.lat_idx, self.lon_idx, self.t_idx)


class SplitSpec(BaseModel):
    """Disjoint year sets for the time-based train/validation/test split."""

    model_config = ConfigDict(frozen=True)

    train_years: List[int] = Field(..., min_length=1)
    val_years: List[int] = Field(..., min_length=1)
    test_years: List[int] = Field(..., min_length=1)

    @model_validator(mode="after")
    def _disjoint(self) -> "SplitSpec":
        train, val, test = set(self.train_years), set(self.val_years), set(self.test_years)
        if train & val or train & test or val & test:
            raise ValueError("train, validation and test years must be disjoint")
        return self

    def years_for(self, split: str) -> List[int]:
        try:
            return {"train": self.train_years, "val": self.val_years, "test": self.test_years}[split]
        except KeyError:
            raise ValueError(f"unknown split '{split}'") from None

    @classmethod
    def default_for(cls, years: List[int]) -> "SplitSpec":
        """All but the last two years train, then one validation and one test year."""
        if len(years) < 3:
            raise ValueError(f"need at least 3 years for a default split, got {len(years)}")
        return cls(train_years=list(years[:-2]), val_years=[years[-2]], test_years=[years[-1]])


class NegativePolicy(BaseModel):
    """How training negatives are subsampled."""

    model_config = ConfigDict(frozen=True)

    mode: Literal["keep_all", "ratio"] = "ratio"
    ratio: float = Field(default=1.0, gt=0, description="Negatives kept per positive in 'ratio' mode")


class SampleSplits(BaseModel):
    """Sample references per split.

    ``train`` is the policy-subsampled training list; ``train_pool`` keeps
    every eligible training sample so negatives can be redrawn each epoch.
    """

    model_config = ConfigDict(frozen=True)

    train: List[SampleIndex]
    train_pool: List[SampleIndex]
    val: List[SampleIndex]
    test: List[SampleIndex]

    def for_split(self, split: str) -> List[SampleIndex]:
        try:
            return {"train": self.train, "val": self.val, "test": self.test}[split]
        except KeyError:
            raise ValueError(f"unknown split '{split}'") from None


def labels_of(samples: List[SampleIndex]) -> np.ndarray:
    """Labels of a sample list as an int array."""
    return np.fromiter((s.label for s in samples), dtype=np.int64, count=len(samples))
