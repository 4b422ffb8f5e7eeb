"""Training loop: BCE loss, SGD with weight decay, SGDR, best-validation selection."""

import math
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from firecast.architectures.forecast_model import ForecastModel
from firecast.models.report import TrainLogRow
from firecast.models.sample import NegativePolicy, SampleIndex
from firecast.models.scored_set import ScoredSet
from firecast.models.train_config import TrainConfig
from firecast.nn.losses import bce_loss
from firecast.services.evaluator import ModelScorer
from firecast.services.metrics import average_precision
from firecast.services.optimizer import sgd_step, sgdr_lr
from firecast.services.sampler import subsample_negatives
from firecast.sources.sample_source import SampleSource
from firecast.utils.errors import NumericalError, SampleError
from firecast.utils.logging_config import get_logger
from firecast.utils.progress import ProgressTracker, timed_operation

logger = get_logger(__name__)

# Independent random streams per epoch: default_rng([seed, stream, epoch])
STREAM_NEGATIVES = 2
STREAM_SHUFFLE = 3
STREAM_DROPOUT = 4


class TrainResult(BaseModel):
    """Best-validation and final parameter snapshots plus the epoch log."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    best_params: Dict[str, np.ndarray]
    final_params: Dict[str, np.ndarray]
    best_epoch: int
    best_val_auprc: float
    log: List[TrainLogRow]


class Trainer:
    """Runs the training protocol on one model, owning its ParamStore for the run."""

    def __init__(self, config: TrainConfig, policy: Optional[NegativePolicy] = None):
        self.config = config
        self.policy = policy or NegativePolicy()

    def _epoch_samples(self, pool: Sequence[SampleIndex], epoch: int) -> List[SampleIndex]:
        seed = self.config.seed
        chosen = subsample_negatives(pool, self.policy, np.random.default_rng([seed, STREAM_NEGATIVES, epoch]))
        order = np.random.default_rng([seed, STREAM_SHUFFLE, epoch]).permutation(len(chosen))
        return [chosen[i] for i in order]

    def _validate(self, model: ForecastModel, source: SampleSource, val: Sequence[SampleIndex]) -> float:
        if not val or not any(s.label for s in val):
            return math.nan
        scores = ModelScorer(model, source, batch_size=max(self.config.batch_size, 256)).score(val)
        return average_precision(ScoredSet.from_arrays(scores, [s.label for s in val]))

    def train_epoch(
        self,
        model: ForecastModel,
        source: SampleSource,
        samples: Sequence[SampleIndex],
        epoch: int,
        lr: float,
    ) -> float:
        """One pass over ``samples``; returns the sample-weighted mean loss."""
        graph = source.graph
        dropout_rng = np.random.default_rng([self.config.seed, STREAM_DROPOUT, epoch])
        chunks = source.batches(list(samples), self.config.batch_size)
        tracker = ProgressTracker(len(chunks), f"epoch {epoch}")
        total = 0.0
        for chunk in chunks:
            features, labels = source.batch(chunk)
            model.store.zero_grad()
            scores = model.forward(features, graph=graph, training=True, rng=dropout_rng)
            loss = bce_loss(scores, labels)
            value = loss.item()
            if not math.isfinite(value):
                raise NumericalError(f"non-finite training loss at epoch {epoch}", epoch=epoch)
            loss.backward()
            sgd_step(model.store, lr, self.config.weight_decay)
            total += value * len(chunk)
            tracker.advance()
        return total / max(len(samples), 1)

    def train(
        self,
        model: ForecastModel,
        source: SampleSource,
        train_pool: Sequence[SampleIndex],
        val: Optional[Sequence[SampleIndex]] = None,
    ) -> TrainResult:
        """Train for ``config.epochs`` epochs, redrawing negatives every epoch.

        Returns the final parameters and those of the epoch with the best
        validation AUPRC (the final epoch when validation is undefined).

        Raises:
            SampleError: Empty training pool.
            NumericalError: Non-finite loss.
        """
        if not train_pool:
            raise SampleError("training set is empty")
        val = list(val or [])
        log: List[TrainLogRow] = []
        best_params = model.store.snapshot()
        best_epoch = -1
        best_auprc = -math.inf

        with timed_operation(f"training {model.architecture} for {self.config.epochs} epochs"):
            for epoch in range(self.config.epochs):
                lr = sgdr_lr(epoch, self.config)
                samples = self._epoch_samples(train_pool, epoch)
                if not samples:
                    raise SampleError("negative subsampling left no training samples (no positives?)")
                loss = self.train_epoch(model, source, samples, epoch, lr)
                val_auprc = self._validate(model, source, val)
                log.append(TrainLogRow(epoch=epoch, lr=lr, train_loss=loss, val_auprc=val_auprc))
                logger.info(
                    f"epoch {epoch}: lr={lr:.6g} loss={loss:.6f} val_auprc={val_auprc:.4f} ({len(samples)} samples)"
                )
                if not math.isnan(val_auprc) and val_auprc > best_auprc:
                    best_auprc = val_auprc
                    best_epoch = epoch
                    best_params = model.store.snapshot()

        final_params = model.store.snapshot()
        if best_epoch < 0:
            logger.warning("validation AUPRC undefined in every epoch; selecting the final parameters")
            best_epoch = self.config.epochs - 1
            best_params = final_params
            best_auprc = math.nan
        return TrainResult(
            best_params=best_params,
            final_params=final_params,
            best_epoch=best_epoch,
            best_val_auprc=best_auprc,
            log=log,
        )
