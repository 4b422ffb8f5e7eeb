"""Average precision (area under the precision-recall curve)."""

import numpy as np

from firecast.models.scored_set import ScoredSet
from firecast.utils.errors import MetricError, get_error_suggestion


def average_precision(scored: ScoredSet) -> float:
    """AP = sum over thresholds of (R_t - R_{t-1}) * P_t.

    Thresholds are the distinct scores in descending order; items sharing a
    score enter the curve together as one block.

    Raises:
        MetricError: No positives (AP undefined).
    """
    n_pos = scored.n_pos
    if len(scored) == 0 or n_pos == 0:
        raise MetricError(
            "average precision is undefined without positives",
            suggestion=get_error_suggestion("no_positives"),
        )
    order = np.argsort(-scored.scores, kind="mergesort")
    scores = scored.scores[order]
    labels = scored.labels[order]
    tp = np.cumsum(labels)
    # last index of every block of equal scores
    ends = np.flatnonzero(np.append(scores[1:] != scores[:-1], True))
    tp_at = tp[ends].astype(np.float64)
    precision = tp_at / (ends + 1)
    recall = tp_at / n_pos
    # rounding can overshoot 1 by an ulp
    return min(1.0, float(np.sum(np.diff(recall, prepend=0.0) * precision)))
