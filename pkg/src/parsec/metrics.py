"""Edge-recovery scores over the upper-triangle pairs of an estimate."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def sensitivity(self) -> float:
        pos = self.tp + self.fn
        return self.tp / pos if pos else 0.0

    @property
    def fdp(self) -> float:
        r = self.tp + self.fp
        return self.fp / r if r else 0.0


def _truth_mask(truth, p: int) -> np.ndarray:
    if isinstance(truth, np.ndarray) and truth.dtype == bool and truth.shape == (p, p):
        return truth | truth.T
    m = np.zeros((p, p), dtype=bool)
    pairs = list(truth)
    if pairs:
        ij = np.asarray(pairs, dtype=np.int64)
        m[ij[:, 0], ij[:, 1]] = True
        m[ij[:, 1], ij[:, 0]] = True
    return m


def pair_scores(estimate, truth) -> tuple[np.ndarray, np.ndarray]:
    """``(|value|, is_edge)`` for every pair ``j < k``."""
    ev = np.asarray(getattr(estimate, "values", estimate), dtype=float)
    p = ev.shape[0]
    mask = _truth_mask(truth, p)
    i, j = np.triu_indices(p, 1)
    return np.abs(ev[i, j]), mask[i, j]


def score_edges(estimate, truth, level: float) -> ConfusionCounts:
    """Pair ``(j, k)`` is called positive iff ``|value| >= level``."""
    s, y = pair_scores(estimate, truth)
    pred = s >= level
    tp = int(np.count_nonzero(pred & y))
    fp = int(np.count_nonzero(pred & ~y))
    fn = int(np.count_nonzero(~pred & y))
    return ConfusionCounts(tp, fp, int(y.size) - tp - fp - fn, fn)


def roc_curve(scores, labels) -> tuple[np.ndarray, np.ndarray]:
    """ROC points swept over distinct score values, starting at (0, 0)."""
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels, dtype=bool)
    npos = int(y.sum())
    nneg = y.size - npos
    if npos == 0 or nneg == 0:
        raise ValueError("ROC needs at least one edge and one non-edge")
    order = np.argsort(-s, kind="stable")
    s, y = s[order], y[order]
    last = np.r_[np.flatnonzero(np.diff(s) != 0), s.size - 1]
    tp = np.cumsum(y)[last]
    fp = (last + 1) - tp
    return np.r_[0.0, fp / nneg], np.r_[0.0, tp / npos]


def auc(estimate, truth, fpr_cap: float = 1.0) -> float:
    """Trapezoidal ROC area, optionally over ``FPR <= fpr_cap`` divided by the cap."""
    if not 0.0 < fpr_cap <= 1.0:
        raise ValueError("fpr_cap must lie in (0, 1]")
    s, y = pair_scores(estimate, truth)
    return auc_from_scores(s, y, fpr_cap)


def auc_from_scores(scores, labels, fpr_cap: float = 1.0) -> float:
    fpr, tpr = roc_curve(scores, labels)
    if fpr_cap < 1.0:
        cut = int(np.searchsorted(fpr, fpr_cap, side="right"))
        if cut < fpr.size:
            x0, x1, y0, y1 = fpr[cut - 1], fpr[cut], tpr[cut - 1], tpr[cut]
            t_cap = y0 + (y1 - y0) * (fpr_cap - x0) / (x1 - x0)
            fpr = np.r_[fpr[:cut], fpr_cap]
            tpr = np.r_[tpr[:cut], t_cap]
    area = np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1])) / 2.0
    return float(area / fpr_cap)


def mcc(counts: ConfusionCounts) -> float:
    """Matthews correlation coefficient; 0 when any marginal is empty."""
    tp, fp, tn, fn = counts.tp, counts.fp, counts.tn, counts.fn
    denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    if denom == 0:
        return 0.0
    return (tp * tn - fp * fn) / math.sqrt(denom)
