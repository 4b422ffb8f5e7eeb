"""
Tests for SGD and the SGDR schedule.
"""
import math

import numpy as np
import pytest

from firecast.models.train_config import TrainConfig
from firecast.nn.params import ParamStore
from firecast.services.optimizer import grad_norm, sgd_step, sgdr_lr
from firecast.utils.errors import FirecastValidationError


class TestSgdrSchedule:
    def setup_method(self):
        self.config = TrainConfig(epochs=100, base_lr=0.01, sgdr_cycles=[25, 75])

    def test_starts_at_base_rate(self):
        assert sgdr_lr(0, self.config) == 0.01

    def test_restart_at_second_cycle(self):
        assert sgdr_lr(25, self.config) == 0.01

    def test_cosine_every_epoch(self):
        for epoch in range(100):
            if epoch < 25:
                position, length = epoch, 25
            else:
                position, length = epoch - 25, 75
            expected = 0.01 / 2 * (1 + math.cos(position / length * math.pi))

            assert sgdr_lr(epoch, self.config) == pytest.approx(expected, abs=1e-12)

    def test_decreasing_inside_cycle(self):
        rates = [sgdr_lr(e, self.config) for e in range(25, 100)]

        assert all(a > b for a, b in zip(rates, rates[1:]))

    def test_eta_min_floor(self):
        config = TrainConfig(epochs=4, base_lr=0.1, eta_min=0.02, sgdr_cycles=[4])

        assert sgdr_lr(2, config) == pytest.approx(0.02 + 0.04 * (1 + math.cos(math.pi / 2)))
        assert all(sgdr_lr(e, config) >= 0.02 for e in range(4))

    def test_epoch_out_of_range(self):
        with pytest.raises(FirecastValidationError):
            sgdr_lr(100, self.config)
        with pytest.raises(FirecastValidationError):
            sgdr_lr(-1, self.config)


class TestSgdStep:
    def setup_method(self):
        self.store = ParamStore()
        self.w = self.store.add("w", (1,), init="ones")

    def test_weight_decay_update(self):
        self.w.grad = np.array([0.5])

        sgd_step(self.store, lr=0.1, weight_decay=0.01)

        assert self.w.data[0] == pytest.approx(0.949)

    def test_zero_lr_keeps_values(self):
        self.w.grad = np.array([3.0])

        sgd_step(self.store, lr=0.0, weight_decay=0.5)

        assert self.w.data[0] == 1.0

    def test_missing_gradient(self):
        self.w.grad = None

        with pytest.raises(FirecastValidationError):
            sgd_step(self.store, lr=0.1)

    def test_grad_norm(self):
        b = self.store.add("b", (2,), init="zeros")
        self.w.grad = np.array([3.0])
        b.grad = np.array([0.0, 4.0])

        assert grad_norm(self.store) == pytest.approx(5.0)
