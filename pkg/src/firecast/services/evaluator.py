"""Scoring of sample sets by models or baselines, and AUPRC reports."""

from abc import ABC, abstractmethod
from typing import Literal, Sequence

import numpy as np
from typing_extensions import override

from firecast.architectures.forecast_model import ForecastModel
from firecast.models.cube import Datacube, TARGET_VARIABLE
from firecast.models.report import EvalReport
from firecast.models.sample import SampleIndex, SampleSpec
from firecast.models.scored_set import ScoredSet
from firecast.services.baselines import prior_fire_counts, seasonal_table
from firecast.services.metrics import average_precision
from firecast.services.standardizer import binarize_target
from firecast.sources.sample_source import SampleSource
from firecast.utils.errors import MetricError, get_error_suggestion
from firecast.utils.logging_config import get_logger
from firecast.utils.progress import ProgressTracker

logger = get_logger(__name__)

BaselineName = Literal["naive-any", "naive-majority"]
BASELINE_NAMES = ("naive-any", "naive-majority")


class Scorer(ABC):
    """Anything that assigns a fire score to sample references."""

    name: str = ""

    @abstractmethod
    def score(self, samples: Sequence[SampleIndex]) -> np.ndarray:
        """Scores aligned with ``samples``.

        Returns:
            np.ndarray: float64 scores in [0, 1].
        """
        pass


class ModelScorer(Scorer):
    """Sigmoid confidence of a trained model, computed in eval mode."""

    def __init__(self, model: ForecastModel, source: SampleSource, batch_size: int = 256):
        self.model = model
        self.source = source
        self.batch_size = batch_size
        self.name = model.architecture

    @override
    def score(self, samples: Sequence[SampleIndex]) -> np.ndarray:
        graph = self.source.graph
        chunks = self.source.batches(list(samples), self.batch_size)
        tracker = ProgressTracker(len(chunks), f"scoring with {self.name}")
        out = []
        for chunk in chunks:
            features, _ = self.source.batch(chunk)
            out.append(self.model.predict(features, graph=graph))
            tracker.advance()
        return np.concatenate(out) if out else np.zeros(0)


class BaselineScorer(Scorer):
    """Naive seasonal baseline with binary scores from earlier years."""

    def __init__(self, name: BaselineName, cube: Datacube, h: int, target_var: str = TARGET_VARIABLE):
        if name not in BASELINE_NAMES:
            raise MetricError(f"unknown baseline '{name}'", suggestion=f"Use one of: {', '.join(BASELINE_NAMES)}")
        self.name = name
        self.h = h
        self.header = cube.header
        self._table = seasonal_table(binarize_target(cube, target_var), cube.header)
        self._counts = prior_fire_counts(self._table)

    @override
    def score(self, samples: Sequence[SampleIndex]) -> np.ndarray:
        header = self.header
        spy = header.steps_per_year
        scores = np.zeros(len(samples))
        for i, s in enumerate(samples):
            slot = header.t0_step + s.t_idx + self.h
            year_idx, period = divmod(slot, spy)
            if year_idx < 1:
                raise MetricError(
                    f"no earlier year for label step {s.t_idx + self.h}",
                    suggestion="Evaluate baselines on a split after the first cube year.",
                )
            fire_years = int(self._counts[year_idx, period, s.lat_idx, s.lon_idx])
            if self.name == "naive-any":
                scores[i] = float(fire_years > 0)
            else:
                scores[i] = float(2 * fire_years > year_idx)
        return scores


def evaluate(
    scorer: Scorer,
    samples: Sequence[SampleIndex],
    spec: SampleSpec,
    split: str = "test",
    seed: int = 0,
) -> EvalReport:
    """Score ``samples`` and report their AUPRC.

    Raises:
        MetricError: Empty set or no positives.
    """
    if not samples:
        raise MetricError(f"no samples to evaluate in split '{split}'")
    labels = np.fromiter((s.label for s in samples), dtype=np.int64, count=len(samples))
    if labels.sum() == 0:
        raise MetricError(
            f"split '{split}' has no positive samples", suggestion=get_error_suggestion("no_positives")
        )
    scored = ScoredSet.from_arrays(scorer.score(samples), labels)
    auprc = average_precision(scored)
    logger.info(f"Evaluated {scorer.name} on {split}: AUPRC={auprc:.4f} ({scored.n_pos} pos / {scored.n_neg} neg)")
    return EvalReport(
        model=scorer.name,
        ts=spec.ts,
        h=spec.h,
        r=spec.r,
        k=spec.k,
        split=split,
        auprc=auprc,
        n_pos=scored.n_pos,
        n_neg=scored.n_neg,
        seed=seed,
    )
