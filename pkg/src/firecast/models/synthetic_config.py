"""Synthetic datacube configuration with pydantic validation."""

from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .cube import DRIVER_VARIABLES


DEFAULT_DRIVER_WEIGHTS: List[float] = [0.3, -0.6, 1.2, 0.0, 0.8, 0.4, -1.0, 0.6, 0.5, 0.3]


class SyntheticConfig(BaseModel):
    """Grid, calendar and fire-process settings of a synthetic cube.

    The fire process is Bernoulli(sigmoid(bias + sum_i w_i * z_i(t - lag)
    + seasonal_weight * seasonal(period, lat))) on land cells, where z_i is
    the unit-scale anomaly signal behind driver i.
    """

    model_config = ConfigDict(frozen=True)

    lat_len: int = Field(default=24, ge=1)
    lon_len: int = Field(default=48, ge=1)
    years: int = Field(default=6, ge=1)
    t0_year: int = 2002
    steps_per_year: int = Field(default=46, ge=1)
    lat_north: float = Field(default=57.5, le=90.0)
    lat_south: float = Field(default=-57.5, ge=-90.0)
    global_longitude: bool = Field(default=True, description="Span the full circle so longitude wraps")
    land_fraction: float = Field(default=0.6, gt=0.0, le=1.0)
    smoothing_passes: int = Field(default=3, ge=0)
    noise_persistence: float = Field(default=0.7, ge=0.0, lt=1.0, description="AR(1) coefficient of driver anomalies")
    seasonal_amplitude: float = Field(default=1.0, ge=0.0)
    anomaly_amplitude: float = Field(default=1.0, ge=0.0)
    fire_bias: float = -3.0
    driver_weights: List[float] = Field(default_factory=lambda: list(DEFAULT_DRIVER_WEIGHTS))
    seasonal_weight: float = 1.5
    lag: int = Field(default=1, ge=0)

    @model_validator(mode="after")
    def _check(self) -> "SyntheticConfig":
        if len(self.driver_weights) != len(DRIVER_VARIABLES):
            raise ValueError(
                f"driver_weights needs {len(DRIVER_VARIABLES)} entries, got {len(self.driver_weights)}"
            )
        if self.lat_south >= self.lat_north:
            raise ValueError("lat_south must be below lat_north")
        return self

    @property
    def time_len(self) -> int:
        return self.years * self.steps_per_year
