"""
Tests for the synthetic datacube generator.
"""
import math

import numpy as np
import pytest

from firecast.models.cube import DRIVER_VARIABLES, TARGET_VARIABLE
from firecast.models.synthetic_config import SyntheticConfig
from firecast.services.standardizer import binarize_target
from firecast.services.synthetic import SyntheticCubeGenerator, generate_synthetic_cube


class TestSyntheticCubeGenerator:
    """Test determinism, layout and the fire process."""

    def setup_method(self):
        self.config = SyntheticConfig(lat_len=6, lon_len=12, years=2, steps_per_year=8)

    def test_deterministic(self):
        a = generate_synthetic_cube(self.config, seed=3)
        b = generate_synthetic_cube(self.config, seed=3)

        for name in a.header.variable_names:
            assert np.array_equal(a.data[name], b.data[name], equal_nan=True)
        assert np.array_equal(a.mask, b.mask)

    def test_seeds_differ(self):
        a = generate_synthetic_cube(self.config, seed=1)
        b = generate_synthetic_cube(self.config, seed=2)

        assert not np.array_equal(a.data["t2m_mean"], b.data["t2m_mean"])

    def test_header(self):
        cube = generate_synthetic_cube(self.config, seed=0)
        header = cube.header

        assert header.variable_names == list(DRIVER_VARIABLES) + [TARGET_VARIABLE]
        assert header.time_len == 16
        assert header.years() == [2002, 2003]
        assert header.wraps_longitude
        assert header.lat_values[0] > header.lat_values[-1]
        assert header.mask_variable is None

    def test_land_and_ocean_variables(self):
        cube = generate_synthetic_cube(self.config, seed=0)
        land = cube.mask.astype(bool)

        assert 0 < land.sum() < land.size
        assert np.all(np.isnan(cube.data["sst"][:, land]))
        assert np.all(np.isfinite(cube.data["sst"][:, ~land]))
        assert np.all(np.isnan(cube.data["lst_day"][:, ~land]))
        assert np.all(np.isfinite(cube.data["t2m_mean"]))

    def test_fires_only_on_land(self):
        cube = generate_synthetic_cube(self.config, seed=0)
        fires = binarize_target(cube)

        assert fires[:, ~cube.mask.astype(bool)].sum() == 0
        assert np.all(cube.data[TARGET_VARIABLE] >= 0)

    def test_static_driver_constant_in_time(self):
        cube = generate_synthetic_cube(self.config, seed=0)

        pop = cube.data["pop_dens"]
        assert np.array_equal(pop[0], pop[-1])

    def test_constant_probability(self):
        config = SyntheticConfig(
            lat_len=8,
            lon_len=16,
            years=3,
            land_fraction=1.0,
            fire_bias=math.log(0.2 / 0.8),
            driver_weights=[0.0] * len(DRIVER_VARIABLES),
            seasonal_weight=0.0,
        )

        cube = generate_synthetic_cube(config, seed=11)

        assert cube.mask.all()
        assert binarize_target(cube).mean() == pytest.approx(0.2, abs=0.02)

    def test_regional_grid_does_not_wrap(self):
        config = self.config.model_copy(update={"global_longitude": False})

        cube = generate_synthetic_cube(config, seed=0)

        assert not cube.header.wraps_longitude

    def test_oracle(self):
        generator = SyntheticCubeGenerator(self.config, seed=5)

        oracle = generator.oracle()

        assert oracle["seed"] == 5
        assert oracle["lag"] == 1
        assert set(oracle["driver_weights"]) == set(DRIVER_VARIABLES)
        assert set(oracle["driver_phases"]) == set(DRIVER_VARIABLES)

    def test_signals_probability_range(self):
        mask, z, probability, fire = SyntheticCubeGenerator(self.config, seed=0).signals()

        assert probability.shape == (16, 6, 12)
        assert np.all((probability >= 0) & (probability <= 1))
        assert np.all(probability[:, mask == 0] == 0)
        assert set(z) == set(DRIVER_VARIABLES)
