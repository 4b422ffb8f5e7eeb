"""Standardization, target binarization and positional encodings."""

import math
from typing import Any, Dict, Iterable, Optional, Tuple

import numpy as np

from firecast.models.cube import TARGET_VARIABLE, CellTime, CubeHeader, Datacube, StandardizationStats, TimeRange
from firecast.utils.errors import FirecastValidationError
from firecast.utils.logging_config import get_logger

logger = get_logger(__name__)

STD_EPS = 1e-8


def compute_standardization(
    cube: Datacube,
    train_range: TimeRange,
    exclude: Iterable[str] = (TARGET_VARIABLE,),
) -> StandardizationStats:
    """Per-variable mean/std over land cells of the training range.

    Non-finite values are ignored; std uses ddof=0 and is clamped to 1e-8.
    A variable undefined over land (sea surface temperature) takes its
    stats from the cells where it is defined; one with no finite value
    anywhere in the range gets mean 0 and std 1, so it standardizes to
    all zeros.

    Raises:
        FirecastValidationError: Empty training range.
    """
    if len(train_range) == 0:
        raise FirecastValidationError("training range is empty", field="train_range")
    if train_range.stop > cube.header.time_len:
        raise FirecastValidationError(
            f"training range ends at {train_range.stop}, cube has {cube.header.time_len} steps",
            field="train_range",
        )
    skip = set(exclude)
    land = cube.mask.astype(bool)
    means: Dict[str, float] = {}
    stds: Dict[str, float] = {}
    for name in cube.header.variable_names:
        if name in skip:
            continue
        window = cube.data[name][train_range.to_slice()]
        values = window[:, land].astype(np.float64)
        values = values[np.isfinite(values)]
        if values.size == 0:
            values = window.astype(np.float64)
            values = values[np.isfinite(values)]
            logger.warning(f"Variable '{name}' has no finite land values; using {values.size} defined cells")
        if values.size == 0:
            means[name] = 0.0
            stds[name] = 1.0
            continue
        mean = float(values.mean())
        std = float(np.sqrt(np.mean((values - mean) ** 2)))
        means[name] = mean
        stds[name] = max(std, STD_EPS)
    logger.info(f"Computed standardization for {len(means)} variables over steps [{train_range.start}, {train_range.stop})")
    return StandardizationStats(mean=means, std=stds, computed_over=train_range)


def standardize(
    cube: Datacube,
    stats: StandardizationStats,
    exclude: Iterable[str] = (TARGET_VARIABLE,),
) -> Datacube:
    """(x - mean) / std per variable; non-finite results become 0.

    Excluded variables are copied through unchanged.

    Raises:
        FirecastValidationError: Stats do not cover a non-excluded variable.
    """
    skip = set(exclude)
    data: Dict[str, np.ndarray] = {}
    for name in cube.header.variable_names:
        raw = cube.data[name]
        if name in skip:
            data[name] = raw
            continue
        if name not in stats.mean:
            raise FirecastValidationError(f"no standardization stats for variable '{name}'", field="stats")
        out = (raw.astype(np.float64) - stats.mean[name]) / stats.std[name]
        data[name] = np.where(np.isfinite(out), out, 0.0)
    # Every standardized variable is finite now
    variables = [
        spec if spec.name in skip else spec.model_copy(update={"fill_policy": "none"})
        for spec in cube.header.variables
    ]
    header = cube.header.model_copy(update={"variables": variables})
    return Datacube(header=header, data=data, mask=cube.mask)


def binarize_target(cube: Datacube, target_var: str = TARGET_VARIABLE) -> np.ndarray:
    """1 where the target is finite and > 0, else 0; uint8 [time][lat][lon]."""
    values = cube.variable(target_var)
    with np.errstate(invalid="ignore"):
        return (np.isfinite(values) & (values > 0)).astype(np.uint8)


def positional_encoding(cell: CellTime, header: CubeHeader) -> Tuple[float, float, float, float]:
    """(sin φ, cos φ, sin λ, cos λ) of the cell centre."""
    phi = math.radians(header.lat_values[cell.lat_idx])
    lam = math.radians(header.lon_values[cell.lon_idx])
    return math.sin(phi), math.cos(phi), math.sin(lam), math.cos(lam)


def positional_planes(header: CubeHeader) -> np.ndarray:
    """Positional encodings of every cell as [4][lat][lon]."""
    phi = np.radians(np.asarray(header.lat_values, dtype=np.float64))[:, None]
    lam = np.radians(np.asarray(header.lon_values, dtype=np.float64))[None, :]
    shape = (header.lat_len, header.lon_len)
    return np.stack([
        np.broadcast_to(np.sin(phi), shape),
        np.broadcast_to(np.cos(phi), shape),
        np.broadcast_to(np.sin(lam), shape),
        np.broadcast_to(np.cos(lam), shape),
    ])


def cube_summary(cube: Datacube, target_var: Optional[str] = TARGET_VARIABLE) -> Dict[str, Any]:
    """Grid size, calendar span, land cells and fire rate over land."""
    h = cube.header
    land = int(cube.mask.sum())
    summary: Dict[str, Any] = {
        "time_len": h.time_len,
        "lat_len": h.lat_len,
        "lon_len": h.lon_len,
        "cells": h.lat_len * h.lon_len,
        "land_cells": land,
        "years": h.years(),
        "variables": h.variable_names,
        "wraps_longitude": h.wraps_longitude,
    }
    if target_var is not None and target_var in cube.data:
        fires = binarize_target(cube, target_var)[:, cube.mask.astype(bool)]
        summary["fire_events"] = int(fires.sum())
        summary["fire_rate"] = float(fires.mean()) if fires.size else 0.0
    return summary
