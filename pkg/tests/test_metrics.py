from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rxmflow.models.metrics import (
    accuracy_score, classification_report, macro_averages,
    mean_squared_error, r2_score,
)

labels = st.lists(st.sampled_from("abc"), min_size=1, max_size=40)


def brute_report(y_true, y_pred):
    """Exact-rational per-class metrics."""
    out = {}
    for cls in sorted(set(y_true) | set(y_pred)):
        tp = sum(1 for t, p in zip(y_true, y_pred) if t == cls and p == cls)
        fp = sum(1 for t, p in zip(y_true, y_pred) if t != cls and p == cls)
        fn = sum(1 for t, p in zip(y_true, y_pred) if t == cls and p != cls)
        precision = Fraction(tp, tp + fp) if tp + fp else Fraction(0)
        recall = Fraction(tp, tp + fn) if tp + fn else Fraction(0)
        f1 = (
            2 * precision * recall / (precision + recall)
            if precision + recall else Fraction(0)
        )
        out[cls] = (precision, recall, f1, y_true.count(cls))
    return out


@given(labels, labels)
def test_report_matches_exact_rationals(y_true, y_pred):
    n = min(len(y_true), len(y_pred))
    y_true, y_pred = y_true[:n], y_pred[:n]
    if n == 0:
        return
    ours = classification_report(y_true, y_pred)
    oracle = brute_report(y_true, y_pred)
    assert set(ours) == set(oracle)
    for cls, (precision, recall, f1, support) in oracle.items():
        assert ours[cls]["precision"] == pytest.approx(float(precision), abs=1e-12)
        assert ours[cls]["recall"] == pytest.approx(float(recall), abs=1e-12)
        assert ours[cls]["f1"] == pytest.approx(float(f1), abs=1e-12)
        assert ours[cls]["support"] == support


@given(labels)
def test_accuracy_of_perfect_prediction_is_one(y):
    assert accuracy_score(y, list(y)) == 1.0


def test_accuracy_by_hand():
    assert accuracy_score(["a", "b", "a", "c"], ["a", "b", "b", "b"]) == 0.5


def test_macro_averages_by_hand():
    report = classification_report(["a", "a", "b"], ["a", "b", "b"])
    precision, recall, f1 = macro_averages(report)
    # class a: p=1, r=1/2, f1=2/3 ; class b: p=1/2, r=1, f1=2/3
    assert precision == pytest.approx(0.75)
    assert recall == pytest.approx(0.75)
    assert f1 == pytest.approx(2 / 3)


def test_r2_and_mse_by_hand():
    y_true = [1.0, 2.0, 3.0, 4.0]
    y_pred = [1.1, 1.9, 3.2, 3.8]
    ss_res = sum((t - p) ** 2 for t, p in zip(y_true, y_pred))
    ss_tot = sum((t - 2.5) ** 2 for t in y_true)
    assert r2_score(y_true, y_pred) == pytest.approx(1 - ss_res / ss_tot, abs=1e-12)
    assert mean_squared_error(y_true, y_pred) == pytest.approx(ss_res / 4, abs=1e-12)


def test_r2_of_mean_prediction_is_zero():
    y = [1.0, 2.0, 3.0]
    assert r2_score(y, [2.0, 2.0, 2.0]) == pytest.approx(0.0)


@given(st.lists(st.floats(-100, 100), min_size=2, max_size=30))
def test_r2_never_exceeds_one(y):
    pred = [v + 0.5 for v in y]
    assert r2_score(y, pred) <= 1.0
    assert mean_squared_error(y, pred) >= 0.0
