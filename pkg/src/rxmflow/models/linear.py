"""Linear models: least squares, ridge (closed form), lasso (coordinate
descent).

Ridge and lasso leave the intercept unpenalized by fitting on centered
data. The lasso objective is (1 / 2n) * RSS + alpha * ||w||_1, so starting
from w = 0 every coefficient stays exactly zero whenever
alpha >= max|Xc^T yc| / n.
"""

from __future__ import annotations

import numpy as np


class LinearRegression:
    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        aug = np.column_stack([np.ones(X.shape[0]), X])
        sol, *_ = np.linalg.lstsq(aug, y, rcond=None)
        self.intercept_ = float(sol[0])
        self.coef_ = sol[1:]
        return self

    def predict(self, X):
        return np.asarray(X, dtype=float) @ self.coef_ + self.intercept_


class Ridge:
    def __init__(self, alpha=1.0):
        self.alpha = alpha

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        x_mean = X.mean(axis=0)
        y_mean = y.mean()
        Xc = X - x_mean
        yc = y - y_mean
        p = X.shape[1]
        self.coef_ = np.linalg.solve(Xc.T @ Xc + self.alpha * np.eye(p), Xc.T @ yc)
        self.intercept_ = float(y_mean - x_mean @ self.coef_)
        return self

    def predict(self, X):
        return np.asarray(X, dtype=float) @ self.coef_ + self.intercept_


class Lasso:
    def __init__(self, alpha=1.0, tol=1e-7, max_iter=10_000):
        self.alpha = alpha
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        n, p = X.shape
        x_mean = X.mean(axis=0)
        y_mean = y.mean()
        Xc = X - x_mean
        yc = y - y_mean

        norms = (Xc * Xc).sum(axis=0) / n
        w = np.zeros(p)
        residual = yc.copy()
        for _ in range(self.max_iter):
            max_delta = 0.0
            for j in range(p):
                if norms[j] == 0.0:
                    continue
                old = w[j]
                rho = (Xc[:, j] @ residual) / n + norms[j] * old
                new = _soft_threshold(rho, self.alpha) / norms[j]
                if new != old:
                    residual += Xc[:, j] * (old - new)
                    w[j] = new
                max_delta = max(max_delta, abs(new - old))
            if max_delta < self.tol:
                break
        self.coef_ = w
        self.intercept_ = float(y_mean - x_mean @ w)
        return self

    def predict(self, X):
        return np.asarray(X, dtype=float) @ self.coef_ + self.intercept_


def _soft_threshold(value, threshold):
    if value > threshold:
        return value - threshold
    if value < -threshold:
        return value + threshold
    return 0.0
