"""Model checkpoints: parameter checkpoint plus model.json.

model.json holds the architecture description, the experiment that
produced the parameters and the standardization statistics needed to
prepare new inputs the same way.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import BaseModel, ConfigDict, ValidationError

from firecast.architectures.forecast_model import ForecastModel
from firecast.config.model_factory import ModelFactory
from firecast.models.cube import StandardizationStats
from firecast.models.experiment import ExperimentSpec
from firecast.nn.params import load_params, save_params
from firecast.utils.errors import CheckpointError, ErrorCategory, FirecastValidationError
from firecast.utils.logging_config import get_logger

logger = get_logger(__name__)

MODEL_FILE = "model.json"
MODEL_FORMAT = "firecast-model"


class Checkpoint(BaseModel):
    """A loaded checkpoint: model with restored parameters and its provenance."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    model: ForecastModel
    experiment: ExperimentSpec
    stats: Optional[StandardizationStats] = None
    extra: Dict[str, Any] = {}


def save_checkpoint(
    model: ForecastModel,
    path: Union[str, Path],
    experiment: ExperimentSpec,
    stats: Optional[StandardizationStats] = None,
    extra: Optional[Dict[str, Any]] = None,
) -> None:
    """Write the model's current parameters and model.json into ``path``."""
    directory = Path(path)
    document = {
        "format": MODEL_FORMAT,
        "version": 1,
        "model": model.describe(),
        "experiment": experiment.model_dump(mode="json"),
        "stats": stats.model_dump(mode="json") if stats is not None else None,
        "extra": extra or {},
    }
    try:
        save_params(model.store, directory)
        (directory / MODEL_FILE).write_text(json.dumps(document, indent=2), encoding="utf-8")
    except OSError as e:
        raise CheckpointError(
            f"failed to write checkpoint: {e}", path=str(directory), category=ErrorCategory.SYSTEM
        ) from e
    logger.info(f"Saved {model.architecture} checkpoint ({model.store.count()} parameters) to {directory}")


def load_checkpoint(path: Union[str, Path]) -> Checkpoint:
    """Rebuild the model described in model.json and load its parameters.

    Raises:
        CheckpointError: Missing or corrupt checkpoint.
    """
    directory = Path(path)
    model_path = directory / MODEL_FILE
    if not model_path.is_file():
        raise CheckpointError(f"no {MODEL_FILE} in {directory}", path=str(directory))
    try:
        document = json.loads(model_path.read_text(encoding="utf-8"))
        if document.get("format") != MODEL_FORMAT:
            raise CheckpointError(f"{model_path} is not a firecast model file", path=str(directory))
        model = ModelFactory.from_description(document["model"])
        experiment = ExperimentSpec.model_validate(document["experiment"])
        stats = StandardizationStats.model_validate(document["stats"]) if document.get("stats") else None
    except (json.JSONDecodeError, KeyError, TypeError, ValidationError, FirecastValidationError) as e:
        raise CheckpointError(f"malformed {MODEL_FILE}: {e}", path=str(directory)) from e
    load_params(model.store, directory)
    logger.info(f"Loaded {model.architecture} checkpoint from {directory}")
    return Checkpoint(model=model, experiment=experiment, stats=stats, extra=document.get("extra") or {})
