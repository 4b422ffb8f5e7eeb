"""Architecture configurations with pydantic validation."""

from typing import List, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class GruConfig(BaseModel):
    """Two stacked GRU layers, dropout between them, linear head."""

    model_config = ConfigDict(frozen=True)

    architecture: Literal["gru"] = "gru"
    layers: int = Field(default=2, ge=1)
    hidden: int = Field(default=64, gt=0)
    dropout: float = Field(default=0.1, ge=0.0, lt=1.0)


class ConvLstmConfig(BaseModel):
    """Conv-LSTM cell over a (2r+1)x(2r+1) grid with an MLP readout."""

    model_config = ConfigDict(frozen=True)

    architecture: Literal["convlstm"] = "convlstm"
    hidden: int = Field(default=16, gt=0, description="Hidden channels")
    kernel_size: int = Field(default=3, ge=1)
    radius: int = Field(default=1, ge=0)
    mlp_widths: List[int] = Field(default_factory=lambda: [256, 64])

    @model_validator(mode="after")
    def _check(self) -> "ConvLstmConfig":
        if self.kernel_size % 2 == 0:
            raise ValueError(f"kernel_size must be odd, got {self.kernel_size}")
        if any(w < 1 for w in self.mlp_widths):
            raise ValueError("mlp_widths must be positive")
        return self

    @property
    def grid_size(self) -> int:
        return 2 * self.radius + 1


class TgcnConfig(BaseModel):
    """T-GCN cell with three 2-layer GCNs, attention and MLP readout."""

    model_config = ConfigDict(frozen=True)

    architecture: Literal["tgcn"] = "tgcn"
    gcn_hidden: int = Field(default=64, gt=0, description="h1 = h2 of every GCN")
    hidden: int = Field(default=64, gt=0, description="Recurrent state size per vertex")
    radius: int = Field(default=1, ge=0)
    k: int = Field(default=9, ge=1)
    attention_heads: int = Field(default=4, ge=1)
    attention_dim: int = Field(default=256, ge=1)
    mlp_widths: List[int] = Field(default_factory=lambda: [256, 64])

    @model_validator(mode="after")
    def _check(self) -> "TgcnConfig":
        if self.attention_dim % self.attention_heads != 0:
            raise ValueError(
                f"attention_dim ({self.attention_dim}) must be divisible by attention_heads ({self.attention_heads})"
            )
        if self.k > self.n_vertices:
            raise ValueError(f"k ({self.k}) exceeds the number of vertices ({self.n_vertices})")
        if any(w < 1 for w in self.mlp_widths):
            raise ValueError("mlp_widths must be positive")
        return self

    @property
    def n_vertices(self) -> int:
        return (2 * self.radius + 1) ** 2
