"""Multinomial softmax regression via full-batch gradient descent.

Objective: mean cross-entropy + (l2 / 2n) * ||W||^2 over the non-bias
weights. Step sizes come from Armijo backtracking, which makes the loss
history non-increasing by construction; training stops when the loss
improvement falls below tol or max_iter is reached.
"""

from __future__ import annotations

import numpy as np

_ARMIJO_C = 1e-4


def _softmax(Z):
    Z = Z - Z.max(axis=1, keepdims=True)
    expz = np.exp(Z)
    return expz / expz.sum(axis=1, keepdims=True)


class LogisticRegression:
    def __init__(self, max_iter=1000, l2=1.0, tol=1e-6):
        self.max_iter = max_iter
        self.l2 = l2
        self.tol = tol

    def _loss_grad(self, Xb, Y, W, n):
        P = _softmax(Xb @ W)
        logp = np.log(np.clip(P, 1e-300, None))
        loss = -float((Y * logp).sum()) / n
        loss += (self.l2 / (2 * n)) * float((W[1:] ** 2).sum())
        grad = Xb.T @ (P - Y) / n
        grad[1:] += (self.l2 / n) * W[1:]
        return loss, grad

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        self.classes_ = np.array(sorted(set(y.tolist())))
        lookup = {c: i for i, c in enumerate(self.classes_.tolist())}
        n, p = X.shape
        k = len(self.classes_)
        Xb = np.column_stack([np.ones(n), X])
        Y = np.zeros((n, k))
        Y[np.arange(n), [lookup[v] for v in y.tolist()]] = 1.0

        W = np.zeros((p + 1, k))
        loss, grad = self._loss_grad(Xb, Y, W, n)
        self.loss_history_ = [loss]
        step = 1.0
        for _ in range(self.max_iter):
            gnorm2 = float((grad * grad).sum())
            if gnorm2 == 0.0:
                break
            t = min(step * 2.0, 1e4)
            while True:
                candidate = W - t * grad
                new_loss, new_grad = self._loss_grad(Xb, Y, candidate, n)
                if new_loss <= loss - _ARMIJO_C * t * gnorm2 or t < 1e-12:
                    break
                t *= 0.5
            step = t
            improvement = loss - new_loss
            W, loss, grad = candidate, new_loss, new_grad
            self.loss_history_.append(loss)
            if improvement < self.tol:
                break
        self.intercept_ = W[0]
        self.coef_ = W[1:].T          # (classes, features)
        return self

    def predict_proba(self, X):
        X = np.asarray(X, dtype=float)
        return _softmax(X @ self.coef_.T + self.intercept_)

    def predict(self, X):
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]
