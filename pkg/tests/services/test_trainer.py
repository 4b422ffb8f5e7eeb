"""
Tests for the training loop.
"""
import math

import numpy as np
import pytest
from pydantic import BaseModel

from firecast.architectures.forecast_model import ForecastModel
from firecast.models.sample import NegativePolicy
from firecast.models.train_config import TrainConfig
from firecast.nn import ops
from firecast.nn.tensor import Tensor
from firecast.services.optimizer import sgdr_lr
from firecast.services.trainer import Trainer
from firecast.sources.array_source import ArraySampleSource
from firecast.utils.errors import NumericalError, SampleError


class LogisticConfig(BaseModel):
    pass


class LogisticModel(ForecastModel):
    """Logistic regression on the last timestep of the centre cell."""

    architecture = "logistic"

    def __init__(self, n_features: int = 2, seed: int = 0):
        super().__init__(LogisticConfig(), n_features, seed)

    def build(self, rng):
        self.store.add("W", (self.n_features, 1), rng, fan_in=self.n_features)
        self.store.add("b", (1,), init="zeros")

    def forward(self, features, graph=None, training=False, rng=None):
        features = self._check_features(features, 1)
        logits = ops.dense(Tensor(features[:, -1, :, 0, 0]), self.store["W"], self.store["b"])
        return ops.sigmoid(ops.reshape(logits, (features.shape[0],)))


def _toy_source(n=60, seed=0):
    rng = np.random.default_rng(seed)
    labels = (rng.random(n) < 0.3).astype(int)
    features = rng.normal(scale=0.5, size=(n, 2, 2, 1, 1))
    features[:, :, 0, 0, 0] += 2.0 * labels[:, None] - 1.0
    return ArraySampleSource(features, labels)


def _config(**overrides):
    fields = {"epochs": 6, "base_lr": 0.5, "weight_decay": 0.0, "sgdr_cycles": [6], "batch_size": 8}
    fields.update(overrides)
    return TrainConfig(**fields)


class TestTrainer:
    """Test the epoch loop, schedule and model selection."""

    def setup_method(self):
        self.source = _toy_source()
        self.indices = self.source.indices()

    def test_loss_decreases(self):
        trainer = Trainer(_config(), NegativePolicy(mode="keep_all"))

        result = trainer.train(LogisticModel(), self.source, self.indices, self.indices)

        assert result.log[-1].train_loss < result.log[0].train_loss
        assert len(result.log) == 6

    def test_log_follows_schedule(self):
        config = _config(epochs=6, sgdr_cycles=[2, 4])

        result = Trainer(config).train(LogisticModel(), self.source, self.indices, self.indices)

        assert [row.epoch for row in result.log] == list(range(6))
        assert [row.lr for row in result.log] == [sgdr_lr(e, config) for e in range(6)]

    def test_zero_learning_rate_keeps_parameters(self):
        model = LogisticModel()
        initial = model.store.snapshot()

        result = Trainer(_config(base_lr=0.0, weight_decay=0.1)).train(model, self.source, self.indices)

        for name, value in initial.items():
            assert np.array_equal(result.final_params[name], value)

    def test_same_seed_same_result(self):
        a = Trainer(_config(seed=3)).train(LogisticModel(seed=1), self.source, self.indices, self.indices)
        b = Trainer(_config(seed=3)).train(LogisticModel(seed=1), self.source, self.indices, self.indices)

        for name in a.final_params:
            assert np.array_equal(a.final_params[name], b.final_params[name])
        assert [r.train_loss for r in a.log] == [r.train_loss for r in b.log]

    def test_different_seed_differs(self):
        a = Trainer(_config(seed=3)).train(LogisticModel(seed=1), self.source, self.indices)
        b = Trainer(_config(seed=4)).train(LogisticModel(seed=1), self.source, self.indices)

        assert not np.array_equal(a.final_params["W"], b.final_params["W"])

    def test_best_epoch_is_first_maximum(self):
        source = _toy_source(seed=5)
        val = _toy_source(n=40, seed=6)
        # validation samples come from a second source with the same layout
        features, _ = val.batch(val.indices())
        merged = ArraySampleSource(
            np.concatenate([source.batch(source.indices())[0], features]),
            np.concatenate([[i.label for i in source.indices()], [i.label for i in val.indices()]]),
        )
        indices = merged.indices()

        result = Trainer(_config()).train(LogisticModel(), merged, indices[:60], indices[60:])

        values = [row.val_auprc for row in result.log]
        assert result.best_val_auprc == max(values)
        assert result.best_epoch == values.index(max(values))

    def test_best_parameters_restore_best_epoch(self):
        model = LogisticModel()

        result = Trainer(_config(epochs=1, sgdr_cycles=[1])).train(model, self.source, self.indices, self.indices)

        assert result.best_epoch == 0
        for name in result.final_params:
            assert np.array_equal(result.best_params[name], result.final_params[name])

    def test_no_validation_positives_selects_final(self):
        negatives = [i for i in self.indices if i.label == 0]

        result = Trainer(_config()).train(LogisticModel(), self.source, self.indices, negatives)

        assert result.best_epoch == 5
        assert math.isnan(result.best_val_auprc)
        assert all(math.isnan(row.val_auprc) for row in result.log)
        assert result.best_params is result.final_params

    def test_non_finite_loss(self):
        features = np.ones((4, 1, 2, 1, 1))
        features[0, 0, 0, 0, 0] = np.nan
        source = ArraySampleSource(features, np.array([1, 0, 1, 0]))

        with pytest.raises(NumericalError) as exc_info:
            Trainer(_config(), NegativePolicy(mode="keep_all")).train(LogisticModel(), source, source.indices())

        assert exc_info.value.epoch == 0

    def test_empty_pool(self):
        with pytest.raises(SampleError):
            Trainer(_config()).train(LogisticModel(), self.source, [])

    def test_no_positives_left(self):
        negatives = [i for i in self.indices if i.label == 0]

        with pytest.raises(SampleError):
            Trainer(_config()).train(LogisticModel(), self.source, negatives)

    def test_negatives_redrawn_each_epoch(self):
        trainer = Trainer(_config(seed=2))

        first = trainer._epoch_samples(self.indices, 0)
        second = trainer._epoch_samples(self.indices, 1)

        n_pos = sum(i.label for i in self.indices)
        assert len(first) == len(second) == 2 * n_pos
        assert {i.t_idx for i in first} != {i.t_idx for i in second}
