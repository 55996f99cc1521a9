"""Evaluation metrics computed from first principles.

Conventions: precision/recall/F1 are 0 when their denominator is 0; macro
averages are unweighted means over the union of true and predicted classes;
R^2 uses the test-set target mean; standard deviations elsewhere in the
engine use the population denominator.
"""

from __future__ import annotations

import numpy as np


def accuracy_score(y_true, y_pred) -> float:
    y_true = list(y_true)
    y_pred = list(y_pred)
    if not y_true:
        raise ValueError("empty label vector")
    return sum(t == p for t, p in zip(y_true, y_pred)) / len(y_true)


def classification_report(y_true, y_pred) -> dict:
    """Per-class precision/recall/F1/support over sorted class labels."""
    y_true = [str(v) for v in y_true]
    y_pred = [str(v) for v in y_pred]
    classes = sorted(set(y_true) | set(y_pred))
    report = {}
    for cls in classes:
        tp = sum(1 for t, p in zip(y_true, y_pred) if t == cls and p == cls)
        fp = sum(1 for t, p in zip(y_true, y_pred) if t != cls and p == cls)
        fn = sum(1 for t, p in zip(y_true, y_pred) if t == cls and p != cls)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = (
            2 * precision * recall / (precision + recall)
            if precision + recall else 0.0
        )
        report[cls] = {
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "support": sum(1 for t in y_true if t == cls),
        }
    return report


def macro_averages(report: dict) -> tuple[float, float, float]:
    if not report:
        return 0.0, 0.0, 0.0
    n = len(report)
    precision = sum(r["precision"] for r in report.values()) / n
    recall = sum(r["recall"] for r in report.values()) / n
    f1 = sum(r["f1"] for r in report.values()) / n
    return precision, recall, f1


def r2_score(y_true, y_pred) -> float:
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    ss_res = float(np.sum((y_true - y_pred) ** 2))
    ss_tot = float(np.sum((y_true - y_true.mean()) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return 1.0 - ss_res / ss_tot


def mean_squared_error(y_true, y_pred) -> float:
    y_true = np.asarray(y_true, dtype=float)
    y_pred = np.asarray(y_pred, dtype=float)
    return float(np.mean((y_true - y_pred) ** 2))
