"""Single-hidden-layer perceptron trained by backpropagation.

Architecture: sigmoid hidden layer, linear output unit. Training is
per-sample stochastic gradient descent with momentum on the squared error,
in the frame's row order. Weights start uniform(-0.5, 0.5) from the seed,
so a fit is reproducible from ``(seed, row order)``.

After every epoch the RMSE over the whole training set is measured; if it
rose, the epoch is rolled back and the learning rate halved, which makes
the recorded loss curve non-increasing by construction.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import expit

from ..errors import DivergedLoss
from ..transform import SupervisedFrame, apply_scaler, fit_scaler
from .base import ForecastModel


def default_hidden(n_features: int) -> int:
    """Default hidden width: half of (features + output), rounded up."""
    return math.ceil((n_features + 1) / 2)


class MlpModel(ForecastModel):

    def __init__(self, hidden: int | None = None, lr: float = 0.3,
                 momentum: float = 0.2, epochs: int = 500, seed: int = 0,
                 standardize: bool = True):
        if hidden is not None and hidden < 1:
            raise ValueError("hidden must be >= 1")
        if lr <= 0:
            raise ValueError("lr must be positive")
        if not 0.0 <= momentum < 1.0:
            raise ValueError("momentum must be in [0, 1)")
        if epochs < 0:
            raise ValueError("epochs must be >= 0")
        self.hidden = hidden
        self.lr = float(lr)
        self.momentum = float(momentum)
        self.epochs = int(epochs)
        self.seed = seed
        self.standardize = standardize

    # --- forward / gradients ------------------------------------------------

    def _forward(self, X: np.ndarray) -> np.ndarray:
        return expit(X @ self.w_in_.T + self.b_in_) @ self.w_out_ + self.b_out_

    def total_loss(self, X: np.ndarray, y: np.ndarray) -> float:
        """Half the summed squared error of the network on (X, y)."""
        err = self._forward(X) - y
        return float(0.5 * err @ err)

    def loss_and_gradients(self, X: np.ndarray, y: np.ndarray):
        """Backpropagated gradients of :meth:`total_loss` at the current weights."""
        hidden_act = expit(X @ self.w_in_.T + self.b_in_)
        err = hidden_act @ self.w_out_ + self.b_out_ - y
        delta = (err[:, None] * self.w_out_) * hidden_act * (1.0 - hidden_act)
        grads = {
            "w_in": delta.T @ X,
            "b_in": delta.sum(axis=0),
            "w_out": hidden_act.T @ err,
            "b_out": np.array([err.sum()]),
        }
        return float(0.5 * err @ err), grads

    def _rmse(self, X: np.ndarray, y: np.ndarray) -> float:
        err = self._forward(X) - y
        return float(np.sqrt(np.mean(err ** 2)))

    # --- training -----------------------------------------------------------

    def fit(self, frame: SupervisedFrame) -> "MlpModel":
        X, y = frame.X, frame.y
        if self.standardize:
            self.x_scaler_ = fit_scaler(X)
            self.y_scaler_ = fit_scaler(y)
            X = apply_scaler(self.x_scaler_, X)
            y = apply_scaler(self.y_scaler_, y)
        n, n_feat = X.shape
        h = self.hidden if self.hidden is not None else default_hidden(n_feat)

        rng = np.random.default_rng(self.seed)
        self.w_in_ = rng.uniform(-0.5, 0.5, size=(h, n_feat))
        self.b_in_ = rng.uniform(-0.5, 0.5, size=h)
        self.w_out_ = rng.uniform(-0.5, 0.5, size=h)
        self.b_out_ = float(rng.uniform(-0.5, 0.5))

        v_w_in = np.zeros_like(self.w_in_)
        v_b_in = np.zeros_like(self.b_in_)
        v_w_out = np.zeros_like(self.w_out_)
        v_b_out = 0.0

        lr = self.lr
        prev_loss = self._rmse(X, y)
        curve = [prev_loss]
        for epoch in range(self.epochs):
            snapshot = (self.w_in_.copy(), self.b_in_.copy(),
                        self.w_out_.copy(), self.b_out_)
            for x_row, target in zip(X, y):
                z_hidden = self.w_in_ @ x_row + self.b_in_
                hidden_act = expit(z_hidden)
                err = self.w_out_ @ hidden_act + self.b_out_ - target
                delta = err * self.w_out_ * hidden_act * (1.0 - hidden_act)

                v_w_out = self.momentum * v_w_out - lr * err * hidden_act
                v_b_out = self.momentum * v_b_out - lr * err
                v_w_in = self.momentum * v_w_in - lr * np.outer(delta, x_row)
                v_b_in = self.momentum * v_b_in - lr * delta
                self.w_out_ += v_w_out
                self.b_out_ += v_b_out
                self.w_in_ += v_w_in
                self.b_in_ += v_b_in

            loss = self._rmse(X, y)
            if not np.isfinite(loss):
                raise DivergedLoss(
                    f"training loss became non-finite at epoch {epoch} (lr={lr:g})")
            if loss > prev_loss:
                # roll the epoch back and retry more cautiously
                self.w_in_, self.b_in_, self.w_out_, self.b_out_ = snapshot
                v_w_in[:] = 0.0
                v_b_in[:] = 0.0
                v_w_out[:] = 0.0
                v_b_out = 0.0
                lr *= 0.5
                curve.append(prev_loss)
            else:
                prev_loss = loss
                curve.append(loss)

        self.loss_curve_ = np.asarray(curve)
        self.final_lr_ = lr
        self._remember_frame(frame)
        return self

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.standardize:
            X = apply_scaler(self.x_scaler_, X)
        out = self._forward(X)
        if self.standardize:
            out = out * self.y_scaler_.scale + self.y_scaler_.mean
        return out

    def param_arrays(self) -> dict:
        return {
            "w_in": self.w_in_,
            "b_in": self.b_in_,
            "w_out": self.w_out_,
            "b_out": np.array([self.b_out_]),
        }
