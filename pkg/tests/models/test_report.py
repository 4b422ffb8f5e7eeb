"""Tests for evaluation report and training log rows."""

import math

import pytest
from pydantic import ValidationError

from firecast.models.report import REPORT_COLUMNS, EvalReport, TrainLogRow
from firecast.models.scored_set import ScoredSet


class TestEvalReport:
    def test_row_has_every_column(self):
        report = EvalReport(model="tgcn", ts=12, h=4, r=2, k=9, split="test", auprc=0.25, n_pos=3, n_neg=9)

        row = report.to_row()

        assert list(row) == REPORT_COLUMNS
        assert row["auprc"] == "0.25"
        assert row["status"] == "ok"

    def test_failed_row_reads_back(self):
        report = EvalReport(model="gru", ts=12, h=1, r=0, k=1, split="test", status="failed")

        again = EvalReport.from_row(report.to_row())

        assert again == report
        assert again.auprc is None

    def test_key(self):
        report = EvalReport(model="convlstm", ts=36, h=8, r=3, k=9, split="test", auprc=0.5)

        assert report.key == ("convlstm", 36, 8, 3)

    def test_auprc_range(self):
        with pytest.raises(ValidationError):
            EvalReport(model="gru", ts=1, h=1, r=0, k=1, split="test", auprc=1.5)


class TestTrainLogRow:
    def test_nan_validation_auprc_serializes(self):
        row = TrainLogRow(epoch=0, lr=0.01, train_loss=0.69)

        assert math.isnan(row.val_auprc)
        assert row.to_row()["val_auprc"] == "nan"


class TestScoredSet:
    def test_counts(self):
        scored = ScoredSet.from_arrays([0.1, 0.9, 0.4], [0, 1, 1])

        assert len(scored) == 3
        assert scored.n_pos == 2
        assert scored.n_neg == 1

    def test_scores_must_be_finite(self):
        with pytest.raises(ValidationError):
            ScoredSet.from_arrays([0.1, float("nan")], [0, 1])

    def test_labels_binary(self):
        with pytest.raises(ValidationError):
            ScoredSet.from_arrays([0.1, 0.2], [0, 2])

    def test_lengths_match(self):
        with pytest.raises(ValidationError):
            ScoredSet.from_arrays([0.1, 0.2, 0.3], [0, 1])
