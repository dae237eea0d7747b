"""Shared forecasting interface for the supervised regression models.

Every model consumes a :class:`~wattcast.transform.SupervisedFrame` (lagged
values plus optional exogenous features) and exposes single-row prediction,
batch prediction, and multi-step series prediction in two modes:

* ``one_step_true_history`` — each step conditions on the actually observed
  values up to the previous step (requires ``actuals``),
* ``recursive`` — predictions are fed back as inputs to reach further ahead.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from ..errors import HistoryTooShort, LengthMismatch
from ..series import TimeSeries
from ..transform import SupervisedFrame

MODE_ONE_STEP = "one_step_true_history"
MODE_RECURSIVE = "recursive"


class ForecastModel(ABC):
    """Base class for lag-embedding regressors.

    Fitted attributes follow the trailing-underscore convention. ``fit``
    returns ``self`` so calls can be chained.
    """

    lag_order_: int
    n_exog_: int

    @abstractmethod
    def fit(self, frame: SupervisedFrame) -> "ForecastModel":
        """Estimate parameters from a supervised frame."""

    @abstractmethod
    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        """Predict one target per feature row."""

    def predict(self, x) -> float:
        """Predict the target for a single feature vector."""
        return float(self.predict_batch(np.atleast_2d(np.asarray(x, dtype=float)))[0])

    def _remember_frame(self, frame: SupervisedFrame) -> None:
        self.lag_order_ = frame.lag_order
        self.n_exog_ = frame.n_exog

    def predict_series(self, history, horizon, *, mode=MODE_RECURSIVE,
                       actuals=None, exog=None) -> np.ndarray:
        """Predict ``horizon`` consecutive values following ``history``.

        ``history`` is a TimeSeries or 1-D array of past target values; its
        last ``lag_order_`` entries seed the window. In one-step mode
        ``actuals`` must supply the realized values over the horizon so each
        step conditions on true history. If the model was fitted with
        exogenous features, ``exog`` must be a (horizon, n_exog) matrix of
        covariate values at each target step.
        """
        values = history.values if isinstance(history, TimeSeries) else np.asarray(history, dtype=float)
        p = self.lag_order_
        if values.size < p:
            raise HistoryTooShort(f"need {p} past values, have {values.size}")
        if horizon < 1:
            raise LengthMismatch("horizon must be >= 1")
        if mode not in (MODE_ONE_STEP, MODE_RECURSIVE):
            raise ValueError(f"unknown mode {mode!r}")
        if self.n_exog_:
            exog = np.asarray(exog, dtype=float) if exog is not None else None
            if exog is None or exog.shape != (horizon, self.n_exog_):
                raise LengthMismatch(
                    f"model uses {self.n_exog_} exogenous features; "
                    f"exog must have shape ({horizon}, {self.n_exog_})")
        if mode == MODE_ONE_STEP:
            actuals = np.asarray(actuals, dtype=float) if actuals is not None else None
            if actuals is None or actuals.size < horizon:
                raise LengthMismatch("one-step mode needs actuals covering the horizon")
            feed = np.concatenate([values, actuals[:horizon]])
        else:
            feed = np.concatenate([values, np.empty(horizon)])

        n0 = values.size
        preds = np.empty(horizon)
        for i in range(horizon):
            window = feed[n0 + i - p: n0 + i]
            if np.isnan(window).any():
                raise HistoryTooShort(f"missing value inside the lag window at step {i}")
            x = window if not self.n_exog_ else np.concatenate([window, exog[i]])
            preds[i] = self.predict(x)
            if mode == MODE_RECURSIVE:
                feed[n0 + i] = preds[i]
        return preds

    def param_arrays(self) -> dict:
        """Fitted parameters as named arrays (for equality checks)."""
        raise NotImplementedError
