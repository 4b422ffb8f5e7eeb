"""JSON configuration loading for experiment, ablation and synthetic configs."""

from pathlib import Path
from typing import Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from firecast.utils.errors import FirecastValidationError
from firecast.utils.logging_config import get_logger

logger = get_logger(__name__)

ConfigT = TypeVar("ConfigT", bound=BaseModel)


def load_config(path: Union[str, Path], model: Type[ConfigT]) -> ConfigT:
    """
    Load and validate a JSON config file.

    Args:
        path: JSON file.
        model: pydantic model class to validate against.

    Returns:
        Validated config instance

    Raises:
        FirecastValidationError: Missing file or invalid content
    """
    config_path = Path(path)
    try:
        text = config_path.read_text(encoding="utf-8")
    except OSError as e:
        raise FirecastValidationError(f"cannot read config file {config_path}: {e}", field="config") from e
    try:
        config = model.model_validate_json(text)
    except ValidationError as e:
        raise FirecastValidationError(f"invalid {model.__name__} in {config_path}: {e}", field="config") from e
    logger.info(f"Loaded {model.__name__} from {config_path}")
    return config
