"""Experiment and ablation specifications with pydantic validation."""

from itertools import product
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .sample import NegativePolicy, SampleSpec, SplitSpec
from .train_config import TrainConfig


ModelName = Literal["gru", "convlstm", "tgcn"]


class ExperimentSpec(BaseModel):
    """Everything needed to reproduce one training/evaluation run."""

    model_config = ConfigDict(frozen=True)

    model: ModelName = "gru"
    ts: int = Field(default=12, ge=1)
    h: int = Field(default=1, ge=1)
    r: int = Field(default=0, ge=0)
    k: int = Field(default=9, ge=1)
    split: Optional[SplitSpec] = None
    train: TrainConfig = Field(default_factory=TrainConfig)
    negative_policy: NegativePolicy = Field(default_factory=NegativePolicy)
    model_options: Dict[str, Any] = Field(default_factory=dict)
    cube: str = ""
    out: str = "runs"
    seed: int = 0

    @model_validator(mode="after")
    def _check(self) -> "ExperimentSpec":
        if self.model == "gru" and self.r != 0:
            raise ValueError("the gru model requires r = 0")
        if self.model == "tgcn" and self.k > (2 * self.r + 1) ** 2:
            raise ValueError(f"k ({self.k}) exceeds the (2r+1)^2 = {(2 * self.r + 1) ** 2} grid vertices")
        return self

    @property
    def sample_spec(self) -> SampleSpec:
        k = min(self.k, (2 * self.r + 1) ** 2)
        return SampleSpec(ts=self.ts, h=self.h, r=self.r, k=k)


class AblationGrid(BaseModel):
    """Sweep axes over a base experiment: models, timeseries lengths, horizons and radii."""

    model_config = ConfigDict(frozen=True)

    base: ExperimentSpec = Field(default_factory=ExperimentSpec)
    models: List[ModelName] = Field(default_factory=lambda: ["convlstm"])
    ts: List[int] = Field(default_factory=lambda: [36])
    horizons: List[int] = Field(default_factory=lambda: [1, 2, 4, 8, 12, 16, 20, 24])
    radii: List[int] = Field(default_factory=lambda: [1, 2, 3, 4, 5, 6, 7])

    @model_validator(mode="after")
    def _check(self) -> "AblationGrid":
        for name, axis in (("models", self.models), ("ts", self.ts), ("horizons", self.horizons), ("radii", self.radii)):
            if not axis:
                raise ValueError(f"ablation axis '{name}' is empty")
        return self

    def expand(self) -> List[ExperimentSpec]:
        """One spec per (model, ts, h, r); the gru model only runs at r = 0."""
        specs: List[ExperimentSpec] = []
        seen = set()
        for model, ts, h, r in product(self.models, self.ts, self.horizons, self.radii):
            if model == "gru":
                r = 0
            key = (model, ts, h, r)
            if key in seen:
                continue
            seen.add(key)
            fields = self.base.model_dump()
            fields.update({"model": model, "ts": ts, "h": h, "r": r})
            if model == "tgcn":
                fields["k"] = min(self.base.k, (2 * r + 1) ** 2)
            specs.append(ExperimentSpec.model_validate(fields))
        return specs
