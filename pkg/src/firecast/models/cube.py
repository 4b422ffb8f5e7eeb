"""Datacube models with pydantic validation."""

from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


DRIVER_VARIABLES: Tuple[str, ...] = (
    "mslp", "tp", "vpd", "sst", "t2m_mean",
    "ssrd", "swvl1", "lst_day", "ndvi", "pop_dens",
)
TARGET_VARIABLE = "gwis_ba"
POSITIONAL_FEATURES: Tuple[str, ...] = ("lat_sin", "lat_cos", "lon_sin", "lon_cos")


class VariableSpec(BaseModel):
    """Name and non-finite policy of one cube variable."""

    name: str = Field(..., min_length=1, description="Variable name, also the .f32 file stem")
    fill_policy: Literal["zero", "none"] = Field(
        default="zero", description="'zero': non-finite values allowed and filled with 0; 'none': all finite"
    )


class TimeRange(BaseModel):
    """Half-open range [start, stop) of time indices."""

    model_config = ConfigDict(frozen=True)

    start: int = Field(..., ge=0)
    stop: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _check_order(self) -> "TimeRange":
        if self.stop < self.start:
            raise ValueError(f"stop ({self.stop}) must not precede start ({self.start})")
        return self

    def __len__(self) -> int:
        return self.stop - self.start

    def to_slice(self) -> slice:
        return slice(self.start, self.stop)


class CellTime(BaseModel):
    """A grid cell at a time index, with its calendar position."""

    model_config = ConfigDict(frozen=True)

    lat_idx: int = Field(..., ge=0)
    lon_idx: int = Field(..., ge=0)
    t_idx: int = Field(..., ge=0)
    year: int
    period: int = Field(..., ge=0)


class CubeHeader(BaseModel):
    """Grid, calendar and variable metadata of a datacube."""

    model_config = ConfigDict(frozen=True)

    time_len: int = Field(..., ge=0)
    lat_len: int = Field(..., ge=0)
    lon_len: int = Field(..., ge=0)
    lat_values: List[float]
    lon_values: List[float]
    steps_per_year: int = Field(default=46, ge=1)
    t0_year: int
    t0_step: int = Field(default=0, ge=0)
    variables: List[VariableSpec]
    mask_variable: Optional[str] = None

    @field_validator("lat_values", "lon_values")
    @classmethod
    def _strictly_monotonic(cls, v: List[float]) -> List[float]:
        if len(v) >= 2:
            diffs = np.diff(np.asarray(v, dtype=np.float64))
            if not (np.all(diffs > 0) or np.all(diffs < 0)):
                raise ValueError("coordinate values must be strictly monotonic")
        return v

    @model_validator(mode="after")
    def _check_consistency(self) -> "CubeHeader":
        if len(self.lat_values) != self.lat_len:
            raise ValueError(f"lat_values has {len(self.lat_values)} entries, expected {self.lat_len}")
        if len(self.lon_values) != self.lon_len:
            raise ValueError(f"lon_values has {len(self.lon_values)} entries, expected {self.lon_len}")
        if self.lon_len >= 2 and abs(self.lon_values[-1] - self.lon_values[0]) > 360.0:
            raise ValueError("longitude span exceeds 360 degrees")
        if self.t0_step >= self.steps_per_year:
            raise ValueError(f"t0_step ({self.t0_step}) must be below steps_per_year ({self.steps_per_year})")
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        return self

    @property
    def variable_names(self) -> List[str]:
        return [v.name for v in self.variables]

    @property
    def n_cells(self) -> int:
        return self.time_len * self.lat_len * self.lon_len

    @property
    def wraps_longitude(self) -> bool:
        """True when the longitude axis is uniform and closes the full circle."""
        if self.lon_len < 2:
            return False
        lons = np.asarray(self.lon_values, dtype=np.float64)
        steps = np.diff(lons)
        if not np.allclose(steps, steps[0], rtol=0.0, atol=1e-6):
            return False
        return abs(abs(steps[0]) * self.lon_len - 360.0) < 1e-6

    def variable(self, name: str) -> VariableSpec:
        for spec in self.variables:
            if spec.name == name:
                return spec
        raise KeyError(name)

    def period_of(self, t_idx: int) -> int:
        return (self.t0_step + t_idx) % self.steps_per_year

    def year_of(self, t_idx: int) -> int:
        return self.t0_year + (self.t0_step + t_idx) // self.steps_per_year

    def years(self) -> List[int]:
        """Every calendar year touched by the time axis."""
        if self.time_len == 0:
            return []
        return list(range(self.year_of(0), self.year_of(self.time_len - 1) + 1))

    def cell_time(self, lat_idx: int, lon_idx: int, t_idx: int) -> CellTime:
        return CellTime(
            lat_idx=lat_idx,
            lon_idx=lon_idx,
            t_idx=t_idx,
            year=self.year_of(t_idx),
            period=self.period_of(t_idx),
        )

    def time_range_for_years(self, years: List[int]) -> TimeRange:
        """Smallest time range covering the given consecutive years."""
        if not years:
            raise ValueError("no years given")
        first = min(years)
        last = max(years)
        start = (first - self.t0_year) * self.steps_per_year - self.t0_step
        stop = (last + 1 - self.t0_year) * self.steps_per_year - self.t0_step
        start = min(max(start, 0), self.time_len)
        stop = min(max(stop, 0), self.time_len)
        return TimeRange(start=start, stop=max(start, stop))


class Datacube(BaseModel):
    """Named float32 variables on a (time, lat, lon) grid plus a land mask.

    Arrays are made read-only on construction, so a cube can be shared
    between workers.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    header: CubeHeader
    data: Dict[str, np.ndarray]
    mask: np.ndarray

    @field_validator("data", mode="before")
    @classmethod
    def _as_float32(cls, v: Dict[str, object]) -> Dict[str, np.ndarray]:
        out = {}
        for name, arr in v.items():
            a = np.array(arr, dtype=np.float32, copy=True)
            a.flags.writeable = False
            out[name] = a
        return out

    @field_validator("mask", mode="before")
    @classmethod
    def _as_uint8(cls, v: object) -> np.ndarray:
        a = np.array(v, dtype=np.uint8, copy=True)
        a.flags.writeable = False
        return a

    @model_validator(mode="after")
    def _check_arrays(self) -> "Datacube":
        h = self.header
        shape = (h.time_len, h.lat_len, h.lon_len)
        if set(self.data) != set(h.variable_names):
            raise ValueError(
                f"data variables {sorted(self.data)} do not match header variables {sorted(h.variable_names)}"
            )
        for spec in h.variables:
            arr = self.data[spec.name]
            if arr.shape != shape:
                raise ValueError(f"variable '{spec.name}' has shape {arr.shape}, expected {shape}")
            if spec.fill_policy == "none" and not np.all(np.isfinite(arr)):
                raise ValueError(f"variable '{spec.name}' has non-finite values but fill_policy is 'none'")
        if self.mask.shape != (h.lat_len, h.lon_len):
            raise ValueError(f"mask has shape {self.mask.shape}, expected {(h.lat_len, h.lon_len)}")
        if np.any(self.mask > 1):
            raise ValueError("mask values must be 0 or 1")
        return self

    def variable(self, name: str) -> np.ndarray:
        try:
            return self.data[name]
        except KeyError:
            raise KeyError(f"variable '{name}' not in cube") from None


class StandardizationStats(BaseModel):
    """Per-variable mean and std computed over a training time range."""

    model_config = ConfigDict(frozen=True)

    mean: Dict[str, float]
    std: Dict[str, float]
    computed_over: TimeRange

    @model_validator(mode="after")
    def _check(self) -> "StandardizationStats":
        if set(self.mean) != set(self.std):
            raise ValueError("mean and std must cover the same variables")
        for name, s in self.std.items():
            if not s > 0:
                raise ValueError(f"std for '{name}' must be positive")
        return self
