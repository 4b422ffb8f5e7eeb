"""Training configuration with pydantic validation."""

from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator


class TrainConfig(BaseModel):
    """Epochs, SGD/SGDR settings and seeds of one training run."""

    model_config = ConfigDict(frozen=True)

    epochs: int = Field(default=100, ge=1)
    base_lr: float = Field(default=0.01, ge=0.0, description="Peak learning rate of every SGDR cycle")
    weight_decay: float = Field(default=0.001, ge=0.0)
    sgdr_cycles: List[int] = Field(default_factory=lambda: [25, 75])
    batch_size: int = Field(default=64, ge=1)
    seed: int = 0
    eta_min: float = Field(default=0.0, ge=0.0)

    @model_validator(mode="after")
    def _check_cycles(self) -> "TrainConfig":
        if not self.sgdr_cycles or any(c < 1 for c in self.sgdr_cycles):
            raise ValueError("sgdr_cycles must be a non-empty list of positive lengths")
        if sum(self.sgdr_cycles) != self.epochs:
            raise ValueError(f"sgdr_cycles sum to {sum(self.sgdr_cycles)}, expected epochs={self.epochs}")
        if self.eta_min > self.base_lr:
            raise ValueError("eta_min must not exceed base_lr")
        return self

    def with_epochs(self, epochs: int) -> "TrainConfig":
        """Copy with a new epoch count and SGDR cycles rescaled to the 1:3 split."""
        if epochs < 4:
            cycles = [epochs]
        else:
            first = epochs // 4
            cycles = [first, epochs - first]
        return self.model_copy(update={"epochs": epochs, "sgdr_cycles": cycles})
