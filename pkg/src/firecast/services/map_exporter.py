"""Prediction maps: per-cell confidence at one time step, as CSV and PGM."""

import csv
from pathlib import Path
from typing import Union

import numpy as np

from firecast.architectures.forecast_model import ForecastModel
from firecast.models.sample import SampleIndex
from firecast.sources.cube_source import CubeSampleSource
from firecast.utils.errors import ErrorCategory, FirecastError, SampleError
from firecast.utils.logging_config import get_logger

logger = get_logger(__name__)


def predict_map(model: ForecastModel, source: CubeSampleSource, t_idx: int, batch_size: int = 256) -> np.ndarray:
    """Scores for every land cell at centre step ``t_idx``; NaN off the mask.

    Raises:
        SampleError: t_idx leaves no room for the input history or horizon.
    """
    header = source.cube.header
    spec = source.spec
    if t_idx - spec.ts + 1 < 0 or t_idx + spec.h >= header.time_len:
        raise SampleError(
            f"t_idx {t_idx} must lie in [{spec.ts - 1}, {header.time_len - spec.h - 1}] for ts={spec.ts}, h={spec.h}"
        )
    lat_idx, lon_idx = np.nonzero(source.cube.mask)
    cells = [
        SampleIndex(lat_idx=int(a), lon_idx=int(b), t_idx=t_idx, label=source.label_at(int(a), int(b), t_idx))
        for a, b in zip(lat_idx, lon_idx)
    ]
    scores = np.full((header.lat_len, header.lon_len), np.nan)
    graph = source.graph
    for chunk in source.batches(cells, batch_size):
        features, _ = source.batch(chunk)
        values = model.predict(features, graph=graph)
        for s, v in zip(chunk, values):
            scores[s.lat_idx, s.lon_idx] = v
    logger.info(f"Predicted {len(cells)} cells at t_idx={t_idx}")
    return scores


def write_map_csv(scores: np.ndarray, source: CubeSampleSource, path: Union[str, Path]) -> None:
    """Rows (lon, lat, score) for every land cell, row-major over the grid."""
    header = source.cube.header
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["lon", "lat", "score"])
            for i in range(header.lat_len):
                for j in range(header.lon_len):
                    if source.cube.mask[i, j]:
                        writer.writerow([repr(header.lon_values[j]), repr(header.lat_values[i]), repr(float(scores[i, j]))])
    except OSError as e:
        raise FirecastError(f"failed to write {target}: {e}", category=ErrorCategory.SYSTEM) from e


def to_gray(scores: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Scores scaled to 0..255 (rounded), 0 off the mask."""
    values = np.where(mask.astype(bool), np.nan_to_num(scores, nan=0.0), 0.0)
    return np.clip(np.rint(values * 255.0), 0, 255).astype(np.uint8)


def write_pgm(scores: np.ndarray, mask: np.ndarray, path: Union[str, Path]) -> None:
    """Binary 8-bit PGM (P5): width lon_len, height lat_len, rows in latitude index order."""
    gray = to_gray(scores, mask)
    height, width = gray.shape
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(f"P5\n{width} {height}\n255\n".encode("ascii") + gray.tobytes())
    except OSError as e:
        raise FirecastError(f"failed to write {target}: {e}", category=ErrorCategory.SYSTEM) from e
    logger.info(f"Wrote {width}x{height} PGM map to {target}")
