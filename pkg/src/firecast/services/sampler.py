"""Sample enumeration, time-based splitting and negative subsampling."""

import csv
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from firecast.models.cube import TARGET_VARIABLE, CellTime, Datacube
from firecast.models.sample import NegativePolicy, Sample, SampleIndex, SampleSpec, SampleSplits, SplitSpec
from firecast.services.standardizer import binarize_target
from firecast.sources.cube_source import CubeSampleSource
from firecast.utils.errors import ErrorCategory, FirecastError, SampleError
from firecast.utils.logging_config import get_logger

logger = get_logger(__name__)

SAMPLE_CSV_COLUMNS = ["lat_idx", "lon_idx", "t_idx", "label"]


def extract_sample(
    cube: Datacube,
    spec: SampleSpec,
    cell: CellTime,
    target_var: str = TARGET_VARIABLE,
) -> Sample:
    """Build one sample centred at ``cell`` from an already standardized cube.

    Raises:
        SampleError: Time window out of range or centre off the land mask.
    """
    source = CubeSampleSource(cube, spec, target_var=target_var)
    index = SampleIndex(lat_idx=cell.lat_idx, lon_idx=cell.lon_idx, t_idx=cell.t_idx, label=0)
    return source.sample(index)


def subsample_negatives(
    pool: Sequence[SampleIndex],
    policy: NegativePolicy,
    rng: np.random.Generator,
) -> List[SampleIndex]:
    """Keep every positive and ``ratio`` negatives per positive, order preserved.

    When fewer negatives exist than requested, all of them are kept.
    """
    if policy.mode == "keep_all":
        return list(pool)
    labels = np.fromiter((s.label for s in pool), dtype=np.int64, count=len(pool))
    negatives = np.flatnonzero(labels == 0)
    n_keep = min(len(negatives), int(round(policy.ratio * int(labels.sum()))))
    keep = np.zeros(len(pool), dtype=bool)
    keep[labels == 1] = True
    if n_keep:
        keep[rng.choice(negatives, size=n_keep, replace=False)] = True
    return [s for s, kept in zip(pool, keep) if kept]


def _eligible_steps(cube: Datacube, spec: SampleSpec, years: Sequence[int], whole_window: bool) -> np.ndarray:
    """Centre steps t whose label year (and optionally first input year) lies in ``years``."""
    header = cube.header
    t = np.arange(spec.ts - 1, header.time_len - spec.h)
    if t.size == 0:
        return t
    year_set = np.asarray(sorted(set(years)))
    label_years = (header.t0_step + t + spec.h) // header.steps_per_year + header.t0_year
    ok = np.isin(label_years, year_set)
    if whole_window:
        first_years = (header.t0_step + t - spec.ts + 1) // header.steps_per_year + header.t0_year
        ok &= np.isin(first_years, year_set)
    return t[ok]


def _indices_for(steps: np.ndarray, land: np.ndarray, labels: np.ndarray, h: int) -> List[SampleIndex]:
    lat_idx, lon_idx = np.nonzero(land)
    out: List[SampleIndex] = []
    for t in steps:
        row = labels[t + h, lat_idx, lon_idx]
        # Built internally from validated ranges
        out.extend(
            SampleIndex.model_construct(lat_idx=int(a), lon_idx=int(b), t_idx=int(t), label=int(y))
            for a, b, y in zip(lat_idx, lon_idx, row)
        )
    return out


def enumerate_samples(
    cube: Datacube,
    spec: SampleSpec,
    split: SplitSpec,
    policy: Optional[NegativePolicy] = None,
    seed: int = 0,
    target_var: str = TARGET_VARIABLE,
) -> SampleSplits:
    """Every valid sample reference, split by year.

    A sample belongs to the split holding its label year. Training samples
    additionally need their first input step inside the training years, so
    no training window reaches outside them. Validation and test samples
    are exhaustive over land cells; training negatives are subsampled per
    ``policy`` with a stream fixed by ``seed``.

    Raises:
        SampleError: If any split ends up empty.
    """
    policy = policy or NegativePolicy()
    if target_var not in cube.data:
        raise SampleError(f"target variable '{target_var}' not in cube")
    source_labels = binarize_target(cube, target_var)
    land = cube.mask.astype(bool)

    result: Dict[str, List[SampleIndex]] = {}
    for name in ("train", "val", "test"):
        steps = _eligible_steps(cube, spec, split.years_for(name), whole_window=(name == "train"))
        result[name] = _indices_for(steps, land, source_labels, spec.h)
        if not result[name]:
            raise SampleError(
                f"split '{name}' (years {split.years_for(name)}) has no samples for ts={spec.ts}, h={spec.h}",
                suggestion="Use a longer cube or a shorter timeseries length/horizon.",
            )

    rng = np.random.default_rng([seed, 0])
    train = subsample_negatives(result["train"], policy, rng)
    logger.info(
        f"Enumerated samples: train {len(train)} of {len(result['train'])}, "
        f"val {len(result['val'])}, test {len(result['test'])}"
    )
    return SampleSplits(train=train, train_pool=result["train"], val=result["val"], test=result["test"])


def export_samples_csv(samples: Sequence[SampleIndex], path: Union[str, Path]) -> None:
    """Write sample references as CSV (lat_idx, lon_idx, t_idx, label)."""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(SAMPLE_CSV_COLUMNS)
            for s in samples:
                writer.writerow([s.lat_idx, s.lon_idx, s.t_idx, s.label])
    except OSError as e:
        raise FirecastError(f"failed to write {target}: {e}", category=ErrorCategory.SYSTEM) from e
    logger.info(f"Exported {len(samples)} sample references to {target}")
