import numpy as np
import pytest

from rxmflow.models import Lasso, LinearRegression, LogisticRegression, Ridge


def well_conditioned(rng, n=100, p=3):
    X = rng.normal(size=(n, p))
    w = np.array([1.5, -2.0, 0.5])[:p]
    y = X @ w + 3.0 + rng.normal(0.0, 0.1, n)
    return X, y


def test_linear_regression_recovers_noiseless_line(rng):
    X = rng.normal(size=(100, 1))
    y = 2.0 * X[:, 0] + 1.0
    model = LinearRegression().fit(X, y)
    assert model.coef_[0] == pytest.approx(2.0, abs=1e-6)
    assert model.intercept_ == pytest.approx(1.0, abs=1e-6)
    pred = model.predict(X)
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    assert 1.0 - ss_res / ss_tot >= 0.999


def test_linear_regression_matches_normal_equations(rng):
    X, y = well_conditioned(rng)
    model = LinearRegression().fit(X, y)
    aug = np.column_stack([np.ones(len(y)), X])
    oracle = np.linalg.solve(aug.T @ aug, aug.T @ y)
    assert model.intercept_ == pytest.approx(oracle[0], abs=1e-8)
    assert np.allclose(model.coef_, oracle[1:], atol=1e-8)


def test_ridge_matches_closed_form(rng):
    X, y = well_conditioned(rng)
    model = Ridge(alpha=1.0).fit(X, y)
    Xc = X - X.mean(axis=0)
    yc = y - y.mean()
    oracle = np.linalg.solve(Xc.T @ Xc + np.eye(3), Xc.T @ yc)
    assert np.allclose(model.coef_, oracle, atol=1e-6)
    assert model.intercept_ == pytest.approx(
        y.mean() - X.mean(axis=0) @ oracle, abs=1e-6)


def test_lasso_soft_threshold_zeroes_everything(rng):
    X, y = well_conditioned(rng)
    Xc = X - X.mean(axis=0)
    yc = y - y.mean()
    alpha_max = float(np.max(np.abs(Xc.T @ yc))) / len(y)
    model = Lasso(alpha=alpha_max * 1.000001).fit(X, y)
    assert np.all(model.coef_ == 0.0)
    assert model.intercept_ == pytest.approx(y.mean())


def test_lasso_below_threshold_keeps_signal(rng):
    X, y = well_conditioned(rng)
    model = Lasso(alpha=0.01).fit(X, y)
    assert np.any(model.coef_ != 0.0)
    pred = model.predict(X)
    assert float(np.mean((pred - y) ** 2)) < 0.1


def test_lasso_shrinks_toward_zero_as_alpha_grows(rng):
    X, y = well_conditioned(rng)
    norms = [
        float(np.abs(Lasso(alpha=a).fit(X, y).coef_).sum())
        for a in (0.01, 0.1, 1.0)
    ]
    assert norms[0] >= norms[1] >= norms[2]


def test_logistic_separable_data_high_accuracy(rng):
    X = np.vstack([
        rng.normal(loc=-2.0, size=(150, 2)),
        rng.normal(loc=+2.0, size=(150, 2)),
    ])
    y = np.array(["neg"] * 150 + ["pos"] * 150)
    model = LogisticRegression(max_iter=1000).fit(X, y)
    assert (model.predict(X) == y).mean() >= 0.95
    assert len(model.loss_history_) <= 1001


def test_logistic_loss_is_non_increasing(rng):
    X = rng.normal(size=(200, 3))
    y = np.where(X[:, 0] + 0.5 * X[:, 1] > 0, "a", "b")
    model = LogisticRegression().fit(X, y)
    history = model.loss_history_
    assert all(b <= a + 1e-12 for a, b in zip(history, history[1:]))


def test_logistic_multiclass_probabilities_sum_to_one(rng):
    X = rng.normal(size=(90, 2))
    y = np.array(["x", "y", "z"] * 30)
    model = LogisticRegression().fit(X, y)
    proba = model.predict_proba(X)
    assert proba.shape == (90, 3)
    assert np.allclose(proba.sum(axis=1), 1.0)
