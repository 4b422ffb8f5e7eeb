"""Evaluation report and training log rows with pydantic validation."""

import math
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


REPORT_COLUMNS: List[str] = [
    "model", "ts", "h", "r", "k", "split", "auprc", "n_pos", "n_neg", "seed", "status",
]
TRAIN_LOG_COLUMNS: List[str] = ["epoch", "lr", "train_loss", "val_auprc"]


def _format_float(value: Optional[float]) -> str:
    if value is None:
        return ""
    return repr(float(value))


def _parse_float(text: str) -> Optional[float]:
    return float(text) if text != "" else None


class EvalReport(BaseModel):
    """One results row: AUPRC of a model or baseline on one split."""

    model_config = ConfigDict(frozen=True)

    model: str = Field(..., min_length=1)
    ts: int = Field(..., ge=1)
    h: int = Field(..., ge=1)
    r: int = Field(..., ge=0)
    k: int = Field(..., ge=1)
    split: str = Field(..., min_length=1)
    auprc: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    n_pos: int = Field(default=0, ge=0)
    n_neg: int = Field(default=0, ge=0)
    seed: int = 0
    status: Literal["ok", "failed"] = "ok"

    @property
    def key(self) -> tuple:
        """Identity of a sweep cell, used for resuming."""
        return (self.model, self.ts, self.h, self.r)

    def to_row(self) -> Dict[str, str]:
        return {
            "model": self.model,
            "ts": str(self.ts),
            "h": str(self.h),
            "r": str(self.r),
            "k": str(self.k),
            "split": self.split,
            "auprc": _format_float(self.auprc),
            "n_pos": str(self.n_pos),
            "n_neg": str(self.n_neg),
            "seed": str(self.seed),
            "status": self.status,
        }

    @classmethod
    def from_row(cls, row: Dict[str, str]) -> "EvalReport":
        return cls(
            model=row["model"],
            ts=int(row["ts"]),
            h=int(row["h"]),
            r=int(row["r"]),
            k=int(row["k"]),
            split=row["split"],
            auprc=_parse_float(row["auprc"]),
            n_pos=int(row["n_pos"]),
            n_neg=int(row["n_neg"]),
            seed=int(row["seed"]),
            status=row.get("status") or "ok",
        )


class TrainLogRow(BaseModel):
    """Per-epoch training log entry; val_auprc is NaN when undefined."""

    model_config = ConfigDict(frozen=True)

    epoch: int = Field(..., ge=0)
    lr: float = Field(..., ge=0.0)
    train_loss: float
    val_auprc: float = math.nan

    def to_row(self) -> Dict[str, str]:
        return {
            "epoch": str(self.epoch),
            "lr": repr(self.lr),
            "train_loss": repr(self.train_loss),
            "val_auprc": repr(self.val_auprc),
        }
