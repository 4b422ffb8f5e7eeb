"""Naive seasonal baselines.

Both look at the same 8-day period of earlier years at the same cell: the
any-year rule predicts fire if any earlier year burned, the majority rule
if burning years strictly outnumber non-burning ones.
"""

import numpy as np

from firecast.models.cube import CubeHeader
from firecast.utils.errors import MetricError


def _prior(history: np.ndarray, target_year_idx: int, period: int) -> np.ndarray:
    history = np.asarray(history)
    if history.ndim != 2:
        raise MetricError(f"history must be [years][periods], got shape {history.shape}")
    if target_year_idx < 1 or target_year_idx > history.shape[0]:
        raise MetricError(f"no history before year index {target_year_idx}")
    if not 0 <= period < history.shape[1]:
        raise MetricError(f"period {period} outside [0, {history.shape[1]})")
    return history[:target_year_idx, period]


def naive_any_baseline(history: np.ndarray, target_year_idx: int, period: int) -> int:
    """1 iff any year before ``target_year_idx`` had fire in ``period``."""
    return int(np.any(_prior(history, target_year_idx, period) > 0))


def naive_majority_baseline(history: np.ndarray, target_year_idx: int, period: int) -> int:
    """1 iff fire years strictly outnumber fire-free years before the target."""
    prior = _prior(history, target_year_idx, period) > 0
    fire_years = int(prior.sum())
    return int(fire_years > prior.size - fire_years)


def seasonal_table(labels: np.ndarray, header: CubeHeader) -> np.ndarray:
    """Binarized labels [time][lat][lon] regrouped as [year][period][lat][lon].

    Year/period slots outside the cube's time axis hold 0.
    """
    n_years = len(header.years())
    spy = header.steps_per_year
    flat = np.zeros((n_years * spy,) + labels.shape[1:], dtype=np.int64)
    flat[header.t0_step:header.t0_step + header.time_len] = labels
    return flat.reshape((n_years, spy) + labels.shape[1:])


def prior_fire_counts(table: np.ndarray) -> np.ndarray:
    """For every (year, period, cell), the number of earlier years with fire."""
    counts = np.zeros_like(table)
    counts[1:] = np.cumsum(table[:-1], axis=0)
    return counts
