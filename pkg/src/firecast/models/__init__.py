"""Models package for cube, sample, configuration and report data structures."""

from .cube import (
    DRIVER_VARIABLES,
    POSITIONAL_FEATURES,
    TARGET_VARIABLE,
    CellTime,
    CubeHeader,
    Datacube,
    StandardizationStats,
    TimeRange,
    VariableSpec,
)
from .experiment import AblationGrid, ExperimentSpec
from .model_config import ConvLstmConfig, GruConfig, TgcnConfig
from .report import EvalReport, TrainLogRow
from .scored_set import ScoredSet
from .sample import GridGraph, NegativePolicy, Sample, SampleIndex, SampleSpec, SampleSplits, SplitSpec
from .synthetic_config import SyntheticConfig
from .train_config import TrainConfig

__all__ = [
    "DRIVER_VARIABLES", "POSITIONAL_FEATURES", "TARGET_VARIABLE",
    "CellTime", "CubeHeader", "Datacube", "StandardizationStats", "TimeRange", "VariableSpec",
    "AblationGrid", "ExperimentSpec",
    "ConvLstmConfig", "GruConfig", "TgcnConfig",
    "EvalReport", "TrainLogRow",
    "GridGraph", "NegativePolicy", "Sample", "SampleIndex", "SampleSpec", "SampleSplits", "SplitSpec",
    "ScoredSet", "SyntheticConfig", "TrainConfig",
]
