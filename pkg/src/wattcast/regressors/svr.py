"""Epsilon-insensitive support vector regression with a Gaussian kernel.

The dual problem

    min  1/2 (a - a*)' K (a - a*) + eps * sum(a + a*) - y' (a - a*)
    s.t. sum(a - a*) = 0,  0 <= a_i, a*_i <= C

is solved by sequential minimal optimization over the stacked variable
vector theta = [a; a*] with signs z = [+1; -1]. Each iteration picks the
maximal violating pair (largest KKT gap between the "up" and "down" index
sets), solves the two-variable subproblem analytically, and updates the
gradient in O(n). Training stops when the KKT gap drops below ``tol``;
hitting ``max_iter`` first leaves ``converged_`` False and keeps the best
iterate found. The bias is the midpoint of the final KKT bounds.

Targets (and inputs) are standardized with train-only statistics by
default, so ``epsilon`` is expressed in standard deviations of the target.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.spatial.distance import cdist

from ..transform import SupervisedFrame, apply_scaler, fit_scaler
from .base import ForecastModel

_TAU = 1e-12


def dual_objective(K: np.ndarray, y: np.ndarray, epsilon: float,
                   alpha: np.ndarray, alpha_star: np.ndarray) -> float:
    """Dual objective in minimization form (lower is better)."""
    beta = alpha - alpha_star
    return float(0.5 * beta @ K @ beta + epsilon * np.sum(alpha + alpha_star) - y @ beta)


def _smo(K: np.ndarray, y: np.ndarray, C: float, epsilon: float,
         tol: float, max_iter: int):
    n = K.shape[0]
    z = np.concatenate([np.ones(n), -np.ones(n)])
    theta = np.zeros(2 * n)
    grad = np.concatenate([epsilon - y, epsilon + y])

    converged = False
    iterations = 0
    while iterations < max_iter:
        neg_zg = -z * grad
        up = ((theta < C) & (z > 0)) | ((theta > 0) & (z < 0))
        low = ((theta < C) & (z < 0)) | ((theta > 0) & (z > 0))
        m_val = np.max(neg_zg[up])
        big_m = np.min(neg_zg[low])
        if m_val - big_m <= tol:
            converged = True
            break
        i = np.flatnonzero(up)[np.argmax(neg_zg[up])]
        j = np.flatnonzero(low)[np.argmin(neg_zg[low])]

        ki, kj = i % n, j % n
        eta = K[ki, ki] + K[kj, kj] - 2.0 * K[ki, kj]
        step = (m_val - big_m) / max(eta, _TAU)
        cap_i = C - theta[i] if z[i] > 0 else theta[i]
        cap_j = theta[j] if z[j] > 0 else C - theta[j]
        step = min(step, cap_i, cap_j)

        theta[i] += z[i] * step
        theta[j] -= z[j] * step
        grad += step * z * np.concatenate([K[:, ki] - K[:, kj]] * 2)
        iterations += 1

    neg_zg = -z * grad
    up = ((theta < C) & (z > 0)) | ((theta > 0) & (z < 0))
    low = ((theta < C) & (z < 0)) | ((theta > 0) & (z > 0))
    bias = 0.5 * (np.max(neg_zg[up]) + np.min(neg_zg[low]))
    return theta[:n], theta[n:], bias, converged, iterations


class SvrModel(ForecastModel):

    def __init__(self, C: float = 1.0, epsilon: float = 0.1, gamma: float | None = None,
                 tol: float = 1e-3, max_iter: int | None = None, standardize: bool = True):
        if C <= 0:
            raise ValueError("C must be positive")
        if epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if gamma is not None and gamma <= 0:
            raise ValueError("gamma must be positive")
        self.C = float(C)
        self.epsilon = float(epsilon)
        self.gamma = gamma
        self.tol = float(tol)
        self.max_iter = max_iter
        self.standardize = standardize

    def fit(self, frame: SupervisedFrame) -> "SvrModel":
        X, y = frame.X, frame.y
        if self.standardize:
            self.x_scaler_ = fit_scaler(X)
            self.y_scaler_ = fit_scaler(y)
            X = apply_scaler(self.x_scaler_, X)
            y = apply_scaler(self.y_scaler_, y)
        n, n_feat = X.shape
        if self.gamma is None:
            x_var = X.var()
            self.gamma_ = 1.0 / (n_feat * x_var) if x_var > 0 else 1.0 / n_feat
        else:
            self.gamma_ = float(self.gamma)
        max_iter = self.max_iter if self.max_iter is not None else 10_000 * n

        K = np.exp(-self.gamma_ * cdist(X, X, "sqeuclidean"))
        alpha, alpha_star, bias, converged, iterations = _smo(
            K, y, self.C, self.epsilon, self.tol, max_iter)

        # project onto the complementary-slackness face: min(a, a*) = 0
        # without changing the coefficient differences (predictions identical,
        # objective can only improve)
        beta = alpha - alpha_star
        self.alpha_ = np.maximum(beta, 0.0)
        self.alpha_star_ = np.maximum(-beta, 0.0)
        self.bias_ = float(bias)
        self.converged_ = converged
        self.n_iter_ = iterations
        support = beta != 0.0
        self.support_ = np.flatnonzero(support)
        self.support_vectors_ = X[support]
        self.dual_coef_ = beta[support]
        self._train_X_ = X
        if not converged:
            warnings.warn(
                f"SVR stopped after {iterations} iterations with KKT gap above "
                f"tol={self.tol}; returning best iterate", RuntimeWarning)
        self._remember_frame(frame)
        return self

    def _decision(self, X: np.ndarray) -> np.ndarray:
        if self.support_vectors_.shape[0] == 0:
            return np.full(X.shape[0], self.bias_)
        K = np.exp(-self.gamma_ * cdist(X, self.support_vectors_, "sqeuclidean"))
        return K @ self.dual_coef_ + self.bias_

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.standardize:
            X = apply_scaler(self.x_scaler_, X)
        out = self._decision(X)
        if self.standardize:
            out = out * self.y_scaler_.scale + self.y_scaler_.mean
        return out

    def param_arrays(self) -> dict:
        return {
            "alpha": self.alpha_,
            "alpha_star": self.alpha_star_,
            "bias": np.array([self.bias_]),
            "support_vectors": self.support_vectors_,
        }
