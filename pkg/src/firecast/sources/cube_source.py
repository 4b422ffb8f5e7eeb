"""Datacube-backed SampleSource."""

from typing import List, Optional, Sequence

import numpy as np

from firecast.models.cube import TARGET_VARIABLE, Datacube
from firecast.models.sample import GridGraph, Sample, SampleIndex, SampleSpec
from firecast.services.grid_graph import TiePolicy, build_grid_graph
from firecast.services.standardizer import binarize_target, positional_planes
from firecast.utils.errors import SampleError
from firecast.utils.logging_config import get_logger

from .sample_source import SampleSource

logger = get_logger(__name__)


class CubeSampleSource(SampleSource):
    """Cuts spatio-temporal windows out of a (standardized) datacube.

    Feature channels are the driver variables in header order followed by
    the four positional planes. Latitude beyond the grid is zero-filled;
    longitude wraps when the cube closes the circle, otherwise zero-fills.
    Labels come from the binarized target.
    """

    def __init__(
        self,
        cube: Datacube,
        spec: SampleSpec,
        target_var: str = TARGET_VARIABLE,
        driver_names: Optional[Sequence[str]] = None,
        tie_policy: TiePolicy = "lexicographic",
    ):
        header = cube.header
        if target_var not in cube.data:
            raise SampleError(f"target variable '{target_var}' not in cube")
        self._cube = cube
        self._spec = spec
        self._tie_policy = tie_policy
        self.driver_names: List[str] = (
            list(driver_names) if driver_names is not None
            else [n for n in header.variable_names if n != target_var]
        )
        planes = [np.nan_to_num(cube.data[n], nan=0.0, posinf=0.0, neginf=0.0) for n in self.driver_names]
        drivers = np.stack(planes, axis=1) if planes else np.zeros((header.time_len, 0, header.lat_len, header.lon_len))
        positional = np.broadcast_to(
            positional_planes(header)[None], (header.time_len, 4, header.lat_len, header.lon_len)
        )
        # [time][F][lat][lon]
        self._stack = np.concatenate([drivers.astype(np.float64), positional], axis=1)
        self._labels = binarize_target(cube, target_var)
        self._land = cube.mask.astype(bool)
        offsets = np.arange(-spec.r, spec.r + 1)
        self._offsets = offsets
        logger.debug(
            f"Cube source ready: {len(self.driver_names)} drivers, ts={spec.ts}, h={spec.h}, r={spec.r}"
        )

    @property
    def cube(self) -> Datacube:
        return self._cube

    @property
    def spec(self) -> SampleSpec:
        return self._spec

    @property
    def n_features(self) -> int:
        return self._stack.shape[1]

    @property
    def graph(self) -> GridGraph:
        return build_grid_graph(self._spec.r, self._spec.k, self._tie_policy)

    @property
    def labels(self) -> np.ndarray:
        """Binarized target, uint8 [time][lat][lon]."""
        return self._labels

    def check(self, lat_idx: int, lon_idx: int, t_idx: int) -> None:
        """Raise SampleError unless a sample can be centred at (lat, lon, t)."""
        header = self._cube.header
        spec = self._spec
        if not (0 <= lat_idx < header.lat_len and 0 <= lon_idx < header.lon_len):
            raise SampleError(f"cell ({lat_idx}, {lon_idx}) outside the grid")
        if t_idx - spec.ts + 1 < 0:
            raise SampleError(f"t_idx {t_idx} leaves no room for ts={spec.ts} input steps")
        if t_idx + spec.h >= header.time_len:
            raise SampleError(f"label step {t_idx + spec.h} beyond time_len {header.time_len}")
        if not self._land[lat_idx, lon_idx]:
            raise SampleError(f"cell ({lat_idx}, {lon_idx}) is off the land mask")

    def window(self, lat_idx: int, lon_idx: int, t_idx: int) -> np.ndarray:
        """Features [ts][F][G][G] ending at t_idx; no range checks."""
        header = self._cube.header
        rows = lat_idx + self._offsets
        cols = lon_idx + self._offsets
        row_ok = (rows >= 0) & (rows < header.lat_len)
        if header.wraps_longitude:
            cols = cols % header.lon_len
            col_ok = np.ones_like(row_ok)
        else:
            col_ok = (cols >= 0) & (cols < header.lon_len)
        rows_c = np.clip(rows, 0, header.lat_len - 1)
        cols_c = np.clip(cols, 0, header.lon_len - 1)
        steps = self._stack[t_idx - self._spec.ts + 1:t_idx + 1]
        out = steps[:, :, rows_c[:, None], cols_c[None, :]]
        return out * (row_ok[:, None] & col_ok[None, :])

    def features(self, index: SampleIndex) -> np.ndarray:
        self.check(index.lat_idx, index.lon_idx, index.t_idx)
        return self.window(index.lat_idx, index.lon_idx, index.t_idx)

    def label_at(self, lat_idx: int, lon_idx: int, t_idx: int) -> int:
        """Binarized target at (lat, lon, t_idx + h)."""
        return int(self._labels[t_idx + self._spec.h, lat_idx, lon_idx])

    def sample(self, index: SampleIndex) -> Sample:
        features = self.features(index)
        return Sample(
            features=features,
            graph=self.graph,
            label=self.label_at(index.lat_idx, index.lon_idx, index.t_idx),
            origin=index.cell_time(self._cube.header),
        )
