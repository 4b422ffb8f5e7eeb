"""Shared fixtures: log redirection and small hand-built datacubes."""

from typing import Callable, Optional

import numpy as np
import pytest

from firecast.models.cube import TARGET_VARIABLE, CubeHeader, Datacube, VariableSpec


@pytest.fixture(autouse=True)
def _log_to_tmp(tmp_path, monkeypatch):
    """Keep firecast.log out of the working directory."""
    monkeypatch.setenv("FIRECAST_LOG_FILE", str(tmp_path / "firecast.log"))


def build_cube(
    years: int = 3,
    lat_len: int = 3,
    lon_len: int = 4,
    steps_per_year: int = 4,
    t0_year: int = 2001,
    wrap: bool = True,
    fire: Optional[np.ndarray] = None,
    mask: Optional[np.ndarray] = None,
    fire_rate: float = 0.3,
    seed: int = 0,
) -> Datacube:
    """Two drivers ('a', 'b') plus the burned-area target on a tiny grid."""
    rng = np.random.default_rng(seed)
    time_len = years * steps_per_year
    shape = (time_len, lat_len, lon_len)
    if fire is None:
        fire = rng.random(shape) < fire_rate
    if mask is None:
        mask = np.ones((lat_len, lon_len), dtype=np.uint8)
    lats = np.linspace(20.0, -20.0, lat_len) if lat_len > 1 else np.array([0.0])
    if wrap:
        step = 360.0 / lon_len
        lons = -180.0 + step / 2.0 + step * np.arange(lon_len)
    else:
        lons = np.arange(lon_len, dtype=np.float64)
    header = CubeHeader(
        time_len=time_len,
        lat_len=lat_len,
        lon_len=lon_len,
        lat_values=[float(v) for v in lats],
        lon_values=[float(v) for v in lons],
        steps_per_year=steps_per_year,
        t0_year=t0_year,
        variables=[
            VariableSpec(name="a", fill_policy="none"),
            VariableSpec(name="b", fill_policy="none"),
            VariableSpec(name=TARGET_VARIABLE, fill_policy="zero"),
        ],
    )
    data = {
        "a": rng.normal(size=shape),
        "b": rng.normal(5.0, 2.0, size=shape),
        TARGET_VARIABLE: np.where(fire, 10.0, 0.0),
    }
    return Datacube(header=header, data=data, mask=mask)


@pytest.fixture
def cube_factory() -> Callable[..., Datacube]:
    return build_cube


@pytest.fixture
def small_cube() -> Datacube:
    return build_cube()
