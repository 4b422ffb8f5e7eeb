"""Model factory for creating the configured forecasting architecture."""

import os
from typing import Any, Dict, Optional

from pydantic import ValidationError

from firecast.architectures.convlstm_model import ConvLstmModel
from firecast.architectures.forecast_model import ForecastModel
from firecast.architectures.gru_model import GruModel
from firecast.architectures.tgcn_model import TgcnModel
from firecast.models.model_config import ConvLstmConfig, GruConfig, TgcnConfig
from firecast.utils.errors import FirecastValidationError

MODEL_NAMES = ("gru", "convlstm", "tgcn")
DEFAULT_MODEL = "gru"


class ModelFactory:
    """Factory class for creating forecasting models based on configuration."""

    @staticmethod
    def create_model(
        name: Optional[str] = None,
        n_features: int = 14,
        r: int = 0,
        k: int = 9,
        seed: int = 0,
        options: Optional[Dict[str, Any]] = None,
    ) -> ForecastModel:
        """
        Create a forecasting model.

        Args:
            name: 'gru', 'convlstm' or 'tgcn'. If None, uses the
                FIRECAST_MODEL environment variable, defaulting to 'gru'.
            n_features: Feature channels per timestep.
            r: Window radius; must be 0 for 'gru'.
            k: Grid-graph degree for 'tgcn'.
            seed: Parameter initialization seed.
            options: Extra architecture config fields (hidden sizes, widths).

        Returns:
            Freshly initialized ForecastModel

        Raises:
            FirecastValidationError: Unknown name or invalid configuration
        """
        if name is None:
            name = os.environ.get("FIRECAST_MODEL", DEFAULT_MODEL)
        name = name.lower()
        options = dict(options or {})

        try:
            if name == "gru":
                if r != 0:
                    raise FirecastValidationError("the gru model requires r = 0", field="r")
                return GruModel(GruConfig(**options), n_features=n_features, seed=seed)
            elif name == "convlstm":
                return ConvLstmModel(ConvLstmConfig(radius=r, **options), n_features=n_features, seed=seed)
            elif name == "tgcn":
                k = min(k, (2 * r + 1) ** 2)
                return TgcnModel(TgcnConfig(radius=r, k=k, **options), n_features=n_features, seed=seed)
        except ValidationError as e:
            raise FirecastValidationError(f"invalid {name} configuration: {e}", field="model_options") from e
        raise FirecastValidationError(
            f"Invalid model type: '{name}'. Valid options are: {', '.join(MODEL_NAMES)}",
            field="model",
        )

    @staticmethod
    def from_description(description: Dict[str, Any]) -> ForecastModel:
        """Rebuild an (untrained) model from ``ForecastModel.describe()`` output."""
        try:
            name = description["architecture"]
            config = dict(description["config"])
            n_features = int(description["n_features"])
            seed = int(description.get("seed", 0))
        except (KeyError, TypeError, ValueError) as e:
            raise FirecastValidationError(f"malformed model description: {e}", field="model") from e
        config.pop("architecture", None)
        try:
            if name == "gru":
                return GruModel(GruConfig(**config), n_features=n_features, seed=seed)
            if name == "convlstm":
                return ConvLstmModel(ConvLstmConfig(**config), n_features=n_features, seed=seed)
            if name == "tgcn":
                return TgcnModel(TgcnConfig(**config), n_features=n_features, seed=seed)
        except ValidationError as e:
            raise FirecastValidationError(f"invalid {name} configuration: {e}", field="model") from e
        raise FirecastValidationError(f"unknown architecture '{name}'", field="model")
