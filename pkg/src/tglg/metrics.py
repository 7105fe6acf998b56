"""Selection and prediction evaluation: true/false positives, rank-based
AUC, prediction mean squared error, classification error, and replicate
aggregation (mean with standard error)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata


class MetricsError(ValueError):
    pass


def tp_fp(selected, truth) -> tuple[int, int]:
    """|selected ∩ truth| and |selected \\ truth|."""
    sel = set(int(j) for j in np.asarray(selected).ravel())
    tru = set(int(j) for j in np.asarray(truth).ravel())
    return len(sel & tru), len(sel - tru)


def auc(scores, truth) -> float:
    """Mann-Whitney AUC of the scores for ranking true nodes above nulls;
    ties count one half."""
    scores = np.asarray(scores, dtype=np.float64).ravel()
    mask = np.zeros(scores.size, dtype=bool)
    truth_idx = np.asarray(truth, dtype=np.int64).ravel()
    mask[truth_idx] = True
    n1 = int(mask.sum())
    n0 = scores.size - n1
    if n1 == 0 or n0 == 0:
        raise MetricsError("AUC needs both true and null nodes")
    ranks = rankdata(scores)  # average ranks on ties
    u = ranks[mask].sum() - n1 * (n1 + 1) / 2.0
    return float(u / (n1 * n0))


def pmse(y_test, y_pred) -> float:
    y_test = np.asarray(y_test, dtype=np.float64).ravel()
    y_pred = np.asarray(y_pred, dtype=np.float64).ravel()
    if y_test.shape != y_pred.shape:
        raise MetricsError("length mismatch")
    r = y_test - y_pred
    return float(np.mean(r * r))


def classification_error(y_test, p_pred) -> int:
    """Count of test cases misclassified at the 0.5 cut (a predicted
    probability of exactly 0.5 classifies as 0)."""
    y_test = np.asarray(y_test, dtype=np.float64).ravel()
    p_pred = np.asarray(p_pred, dtype=np.float64).ravel()
    if y_test.shape != p_pred.shape:
        raise MetricsError("length mismatch")
    pred = (p_pred > 0.5).astype(np.float64)
    return int(np.sum(pred != y_test))


@dataclass(frozen=True)
class EvalReport:
    """Per-replicate selection/prediction metrics (pmse for gaussian runs,
    ce for binary)."""

    tp: int
    fp: int
    auc: float
    pmse: float | None = None
    ce: int | None = None

    def metrics(self) -> dict:
        out = {"tp": float(self.tp), "fp": float(self.fp), "auc": self.auc}
        if self.pmse is not None:
            out["pmse"] = self.pmse
        if self.ce is not None:
            out["ce"] = float(self.ce)
        return out


def aggregate(reports) -> dict[str, tuple[float, float]]:
    """Mean and standard error (sd/sqrt(R)) per metric over replicates."""
    reports = list(reports)
    if len(reports) < 2:
        raise MetricsError("need at least 2 replicates to aggregate")
    keys = reports[0].metrics().keys()
    out = {}
    for k in keys:
        vals = np.array([r.metrics()[k] for r in reports], dtype=np.float64)
        out[k] = (float(vals.mean()),
                  float(vals.std(ddof=1) / np.sqrt(len(vals))))
    return out
