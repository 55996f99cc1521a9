"""RBF-kernel support vector machines trained with simplified sequential
minimal optimization.

gamma follows the scale heuristic 1 / (p * Var(X)) with the variance taken
over every entry of the training matrix. The full kernel matrix is
materialized, which is why the engine only offers these models at desk
scale (n <= 2000).

SVC is the classic simplified SMO (random partner selection, analytic pair
update, bias from the KKT conditions) wrapped one-vs-rest for multiclass.
SVR optimizes the epsilon-insensitive dual in the beta = alpha - alpha*
parameterization: a pair step moves along (e_i - e_j), where the objective
is piecewise quadratic with breakpoints where beta_i or beta_j crosses
zero, so the best move is found by checking each segment optimum plus the
breakpoints and box ends.
"""

from __future__ import annotations

import numpy as np


def _rbf_gamma(X):
    var = float(X.var())
    if var <= 0.0:
        return 1.0
    return 1.0 / (X.shape[1] * var)


def _rbf_kernel(A, B, gamma):
    a2 = (A * A).sum(axis=1)[:, None]
    b2 = (B * B).sum(axis=1)[None, :]
    d2 = np.maximum(a2 + b2 - 2.0 * (A @ B.T), 0.0)
    return np.exp(-gamma * d2)


class _BinarySVC:
    """Simplified SMO for y in {-1, +1}."""

    def __init__(self, C=1.0, tol=1e-3, max_passes=200, seed=0):
        self.C = C
        self.tol = tol
        self.max_passes = max_passes
        self.seed = seed

    def fit(self, X, y, gamma):
        n = X.shape[0]
        K = _rbf_kernel(X, X, gamma)
        alpha = np.zeros(n)
        b = 0.0
        rng = np.random.default_rng(self.seed)

        def f(i):
            return float((alpha * y) @ K[:, i]) + b

        for _ in range(self.max_passes):
            changed = 0
            for i in range(n):
                e_i = f(i) - y[i]
                if not ((y[i] * e_i < -self.tol and alpha[i] < self.C)
                        or (y[i] * e_i > self.tol and alpha[i] > 0)):
                    continue
                j = int(rng.integers(0, n - 1))
                if j >= i:
                    j += 1
                e_j = f(j) - y[j]
                ai_old, aj_old = alpha[i], alpha[j]
                if y[i] != y[j]:
                    lo = max(0.0, aj_old - ai_old)
                    hi = min(self.C, self.C + aj_old - ai_old)
                else:
                    lo = max(0.0, ai_old + aj_old - self.C)
                    hi = min(self.C, ai_old + aj_old)
                if lo == hi:
                    continue
                eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
                if eta >= 0:
                    continue
                aj = np.clip(aj_old - y[j] * (e_i - e_j) / eta, lo, hi)
                if abs(aj - aj_old) < 1e-5:
                    continue
                ai = ai_old + y[i] * y[j] * (aj_old - aj)
                alpha[i], alpha[j] = ai, aj
                b1 = (b - e_i - y[i] * (ai - ai_old) * K[i, i]
                      - y[j] * (aj - aj_old) * K[i, j])
                b2 = (b - e_j - y[i] * (ai - ai_old) * K[i, j]
                      - y[j] * (aj - aj_old) * K[j, j])
                if 0 < ai < self.C:
                    b = b1
                elif 0 < aj < self.C:
                    b = b2
                else:
                    b = (b1 + b2) / 2.0
                changed += 1
            if changed == 0:
                break
        self.alpha_y_ = alpha * y
        self.b_ = b
        self.X_ = X
        return self

    def decision_function(self, X, gamma):
        K = _rbf_kernel(X, self.X_, gamma)
        return K @ self.alpha_y_ + self.b_


class SVC:
    """One-vs-rest RBF support vector classifier."""

    def __init__(self, C=1.0, tol=1e-3, max_passes=200, seed=0):
        self.C = C
        self.tol = tol
        self.max_passes = max_passes
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        self.classes_ = np.array(sorted(set(y.tolist())))
        self.gamma_ = _rbf_gamma(X)
        self.machines_ = []
        for k, cls in enumerate(self.classes_.tolist()):
            target = np.where(y == cls, 1.0, -1.0)
            machine = _BinarySVC(self.C, self.tol, self.max_passes, self.seed + k)
            machine.fit(X, target, self.gamma_)
            self.machines_.append(machine)
        return self

    def decision_function(self, X):
        X = np.asarray(X, dtype=float)
        return np.column_stack(
            [m.decision_function(X, self.gamma_) for m in self.machines_]
        )

    def predict(self, X):
        scores = self.decision_function(X)
        if scores.ndim == 1 or scores.shape[1] == 1:
            return self.classes_[(scores.ravel() > 0).astype(int)]
        return self.classes_[np.argmax(scores, axis=1)]


class SVR:
    """Epsilon-insensitive RBF support vector regression."""

    def __init__(self, C=1.0, epsilon=0.1, tol=1e-3, max_passes=200, seed=0):
        self.C = C
        self.epsilon = epsilon
        self.tol = tol
        self.max_passes = max_passes
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        n = X.shape[0]
        self.gamma_ = _rbf_gamma(X)
        K = _rbf_kernel(X, X, self.gamma_)
        beta = np.zeros(n)
        k_beta = np.zeros(n)           # K @ beta, maintained incrementally
        rng = np.random.default_rng(self.seed)
        eps = self.epsilon
        C = self.C

        def objective_delta(i, j, t, f_i, f_j, eta):
            smooth = (f_j - f_i) * t - 0.5 * eta * t * t
            l1 = (abs(beta[i] + t) - abs(beta[i])
                  + abs(beta[j] - t) - abs(beta[j]))
            return smooth - eps * l1

        for _ in range(self.max_passes):
            changed = 0
            for i in range(n):
                j = int(rng.integers(0, n - 1))
                if j >= i:
                    j += 1
                eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
                if eta <= 1e-12:
                    continue
                f_i = k_beta[i] - y[i]
                f_j = k_beta[j] - y[j]
                lo = max(-C - beta[i], beta[j] - C)
                hi = min(C - beta[i], beta[j] + C)
                if hi <= lo:
                    continue
                candidates = [lo, hi, -beta[i], beta[j]]
                for s_i in (-1.0, 1.0):
                    for s_j in (-1.0, 1.0):
                        candidates.append(
                            (f_j - f_i - eps * (s_i - s_j)) / eta
                        )
                best_t, best_gain = 0.0, 0.0
                for t in candidates:
                    if t < lo or t > hi:
                        continue
                    gain = objective_delta(i, j, t, f_i, f_j, eta)
                    if gain > best_gain:
                        best_gain, best_t = gain, t
                if best_gain <= 1e-12 or abs(best_t) < 1e-8:
                    continue
                beta[i] += best_t
                beta[j] -= best_t
                k_beta += best_t * (K[:, i] - K[:, j])
                changed += 1
            if changed == 0:
                break

        free = (np.abs(beta) > 1e-8) & (np.abs(beta) < C - 1e-8)
        if free.any():
            self.b_ = float(np.mean(
                y[free] - k_beta[free] - eps * np.sign(beta[free])
            ))
        else:
            self.b_ = float(np.mean(y - k_beta))
        self.beta_ = beta
        self.X_ = X
        return self

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        K = _rbf_kernel(X, self.X_, self.gamma_)
        return K @ self.beta_ + self.b_
