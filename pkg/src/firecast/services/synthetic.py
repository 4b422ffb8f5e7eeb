"""Synthetic datacube generator.

Produces a desk-scale stand-in for the global fire datacube: ten drivers with
annual cycles plus spatially correlated, temporally persistent anomalies, a
land mask, and a burned-area target drawn from a logistic model of lagged
drivers with hemisphere-dependent seasonality.
"""

import math
from typing import Any, Dict, Tuple

import numpy as np

from firecast.models.cube import DRIVER_VARIABLES, TARGET_VARIABLE, CubeHeader, Datacube, VariableSpec
from firecast.models.synthetic_config import SyntheticConfig
from firecast.utils.errors import FirecastValidationError
from firecast.utils.logging_config import get_logger

logger = get_logger(__name__)

# (offset, scale) turning the unit-scale driver signal into plausible units
DRIVER_UNITS: Dict[str, Tuple[float, float]] = {
    "mslp": (101325.0, 800.0),
    "tp": (0.003, 0.002),
    "vpd": (8.0, 4.0),
    "sst": (290.0, 5.0),
    "t2m_mean": (288.0, 8.0),
    "ssrd": (1.6e7, 5.0e6),
    "swvl1": (0.25, 0.08),
    "lst_day": (295.0, 10.0),
    "ndvi": (0.45, 0.15),
    "pop_dens": (50.0, 30.0),
}
# Undefined over land / over ocean respectively
OCEAN_ONLY = ("sst",)
LAND_ONLY = ("lst_day",)
STATIC = ("pop_dens",)

NORTH_PEAK = 0.55
SOUTH_PEAK = 0.05


def _smooth(field: np.ndarray, passes: int, wrap_lon: bool) -> np.ndarray:
    """Repeated 3x3 box filter over the last two axes (lat edge-padded)."""
    lead = [(0, 0)] * (field.ndim - 2)
    for _ in range(passes):
        padded = np.pad(field, lead + [(1, 1), (0, 0)], mode="edge")
        if wrap_lon:
            padded = np.concatenate([padded[..., -1:], padded, padded[..., :1]], axis=-1)
        else:
            padded = np.pad(padded, lead + [(0, 0), (1, 1)], mode="edge")
        height, width = field.shape[-2:]
        acc = np.zeros_like(field)
        for du in range(3):
            for dv in range(3):
                acc += padded[..., du:du + height, dv:dv + width]
        field = acc / 9.0
    return field


def _unit_scale(field: np.ndarray) -> np.ndarray:
    std = field.std()
    centered = field - field.mean()
    return centered / std if std > 0 else centered


class SyntheticCubeGenerator:
    """Deterministic generator: a pure function of (config, seed)."""

    def __init__(self, config: SyntheticConfig, seed: int):
        if config.years < 1 or config.lat_len < 1 or config.lon_len < 1:
            raise FirecastValidationError("synthetic cube needs at least one year and one grid cell", field="config")
        self.config = config
        self.seed = seed
        self._driver_phases: Dict[str, float] = {}

    def _coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        c = self.config
        if c.lat_len == 1:
            lats = np.array([(c.lat_north + c.lat_south) / 2.0])
        else:
            lats = np.linspace(c.lat_north, c.lat_south, c.lat_len)
        if c.global_longitude:
            step = 360.0 / c.lon_len
            lons = -180.0 + step / 2.0 + step * np.arange(c.lon_len)
        else:
            lons = np.arange(c.lon_len, dtype=np.float64) - c.lon_len / 2.0
        return lats, lons

    def _seasonal(self, lats: np.ndarray, phase: float = 0.0) -> np.ndarray:
        """cos(2π(period/P - peak(lat) - phase)) as [T, lat, 1]."""
        c = self.config
        periods = (np.arange(c.time_len) % c.steps_per_year) / c.steps_per_year
        peaks = np.where(lats >= 0, NORTH_PEAK, SOUTH_PEAK)
        angle = 2.0 * math.pi * (periods[:, None] - peaks[None, :] - phase)
        return np.cos(angle)[:, :, None]

    def _land_mask(self, rng: np.random.Generator) -> np.ndarray:
        c = self.config
        field = _smooth(rng.standard_normal((c.lat_len, c.lon_len)), c.smoothing_passes + 2, c.global_longitude)
        if c.land_fraction >= 1.0:
            return np.ones_like(field, dtype=np.uint8)
        threshold = np.quantile(field, 1.0 - c.land_fraction)
        mask = (field >= threshold).astype(np.uint8)
        if mask.sum() == 0:
            mask.flat[int(np.argmax(field))] = 1
        return mask

    def _anomaly(self, rng: np.random.Generator) -> np.ndarray:
        """Spatially smoothed AR(1) noise of unit scale, [T, lat, lon]."""
        c = self.config
        innovations = rng.standard_normal((c.time_len, c.lat_len, c.lon_len))
        innovations = _unit_scale(_smooth(innovations, c.smoothing_passes, c.global_longitude))
        rho = c.noise_persistence
        out = np.empty_like(innovations)
        out[0] = innovations[0]
        gain = math.sqrt(1.0 - rho * rho)
        for t in range(1, c.time_len):
            out[t] = rho * out[t - 1] + gain * innovations[t]
        return out

    def signals(self) -> Tuple[np.ndarray, Dict[str, np.ndarray], np.ndarray, np.ndarray]:
        """Land mask, unit-scale driver signals, fire probability and fire draws."""
        c = self.config
        rng = np.random.default_rng(self.seed)
        lats, _ = self._coordinates()
        mask = self._land_mask(rng)

        z: Dict[str, np.ndarray] = {}
        for name in DRIVER_VARIABLES:
            phase = float(rng.uniform(0.0, 1.0))
            self._driver_phases[name] = phase
            anomaly = self._anomaly(rng)
            if name in STATIC:
                z[name] = np.broadcast_to(anomaly[:1], anomaly.shape).copy()
            else:
                z[name] = c.seasonal_amplitude * self._seasonal(lats, phase) + c.anomaly_amplitude * anomaly

        lagged_index = np.maximum(np.arange(c.time_len) - c.lag, 0)
        logit = np.full((c.time_len, c.lat_len, c.lon_len), c.fire_bias)
        for name, weight in zip(DRIVER_VARIABLES, c.driver_weights):
            if weight != 0.0:
                logit = logit + weight * z[name][lagged_index]
        if c.seasonal_weight != 0.0:
            logit = logit + c.seasonal_weight * self._seasonal(lats)
        probability = 1.0 / (1.0 + np.exp(-logit))
        probability = probability * mask[None, :, :]

        fire = rng.random(probability.shape) < probability
        return mask, z, probability, fire

    def generate(self) -> Datacube:
        c = self.config
        rng_area = np.random.default_rng([self.seed, 1])
        lats, lons = self._coordinates()
        mask, z, _, fire = self.signals()
        land = mask.astype(bool)[None, :, :]

        data: Dict[str, np.ndarray] = {}
        variables = []
        for name in DRIVER_VARIABLES:
            offset, scale = DRIVER_UNITS[name]
            values = offset + scale * z[name]
            if name in OCEAN_ONLY:
                values = np.where(land, np.nan, values)
            elif name in LAND_ONLY:
                values = np.where(land, values, np.nan)
            data[name] = values.astype(np.float32)
            policy = "zero" if name in OCEAN_ONLY + LAND_ONLY else "none"
            variables.append(VariableSpec(name=name, fill_policy=policy))

        hectares = np.exp(rng_area.normal(5.0, 1.0, size=fire.shape))
        data[TARGET_VARIABLE] = np.where(fire, hectares, 0.0).astype(np.float32)
        variables.append(VariableSpec(name=TARGET_VARIABLE, fill_policy="zero"))

        header = CubeHeader(
            time_len=c.time_len,
            lat_len=c.lat_len,
            lon_len=c.lon_len,
            lat_values=[float(v) for v in lats],
            lon_values=[float(v) for v in lons],
            steps_per_year=c.steps_per_year,
            t0_year=c.t0_year,
            t0_step=0,
            variables=variables,
        )
        cube = Datacube(header=header, data=data, mask=mask)
        logger.info(
            f"Generated synthetic cube {c.time_len}x{c.lat_len}x{c.lon_len}, seed={self.seed}, "
            f"land cells={int(mask.sum())}, fires={int(fire.sum())}"
        )
        return cube

    def oracle(self) -> Dict[str, Any]:
        """Generating coefficients, written next to the cube as oracle.json."""
        if not self._driver_phases:
            self.signals()
        c = self.config
        return {
            "seed": self.seed,
            "fire_bias": c.fire_bias,
            "driver_weights": dict(zip(DRIVER_VARIABLES, c.driver_weights)),
            "seasonal_weight": c.seasonal_weight,
            "lag": c.lag,
            "seasonal_peaks": {"north": NORTH_PEAK, "south": SOUTH_PEAK},
            "driver_phases": dict(self._driver_phases),
            "driver_units": {name: list(units) for name, units in DRIVER_UNITS.items()},
            "config": c.model_dump(),
        }


def generate_synthetic_cube(config: SyntheticConfig, seed: int) -> Datacube:
    """Generate a synthetic cube; same (config, seed) gives a bit-identical cube."""
    return SyntheticCubeGenerator(config, seed).generate()
