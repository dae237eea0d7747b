"""K-nearest-neighbour regression.

Prediction is the arithmetic mean of the targets of the K training points
closest in Euclidean distance. Distance ties keep the earlier training
index (stable sort), which makes the estimator deterministic.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import KTooLarge
from ..transform import SupervisedFrame
from .base import ForecastModel


class KnnModel(ForecastModel):

    def __init__(self, k: int = 3):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = int(k)

    def fit(self, frame: SupervisedFrame) -> "KnnModel":
        if self.k > frame.n_samples:
            raise KTooLarge(f"k={self.k} exceeds {frame.n_samples} training samples")
        self.X_ = frame.X
        self.y_ = frame.y
        self._remember_frame(frame)
        return self

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        dists = cdist(np.atleast_2d(np.asarray(X, dtype=float)), self.X_)
        order = np.argsort(dists, axis=1, kind="stable")[:, :self.k]
        return self.y_[order].mean(axis=1)

    def param_arrays(self) -> dict:
        return {"X": self.X_, "y": self.y_}
