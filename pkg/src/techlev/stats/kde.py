"""Gaussian kernel density estimate of change directions on (-45, 315]."""

from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from ..exceptions import StatisticsError

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def silverman_bandwidth(values) -> float:
    """Rule-of-thumb bandwidth ``1.06 * std * n**(-1/5)`` (sample std)."""
    x = np.asarray(values, dtype=float)
    if x.size < 2 or np.ptp(x) == 0:
        raise StatisticsError(
            "automatic bandwidth needs at least two distinct values; pass an explicit bandwidth"
        )
    return float(1.06 * np.std(x, ddof=1) * x.size ** (-0.2))


class AngleKDE(BaseEstimator):
    """Gaussian KDE over an angular window.

    Parameters
    ----------
    bandwidth : float, optional
        Kernel standard deviation in degrees; Silverman's rule when None.
    grid_size : int, default=360
        Points of the evaluation grid spanning ``[low, high]``.
    low, high : float
        Window bounds in degrees.
    circular : bool, default=False
        Wrap kernels with period ``high - low`` instead of treating the
        window as a line segment.
    """

    def __init__(self, bandwidth=None, grid_size=360, low=-45.0, high=315.0, circular=False):
        self.bandwidth = bandwidth
        self.grid_size = grid_size
        self.low = low
        self.high = high
        self.circular = circular

    def fit(self, X, y=None):
        x = check_array(np.asarray(X, dtype=float).reshape(-1, 1), dtype=float).ravel()
        if self.bandwidth is None:
            self.bandwidth_ = silverman_bandwidth(x)
        else:
            if not self.bandwidth > 0:
                raise ValueError(f"bandwidth must be positive, got {self.bandwidth!r}")
            self.bandwidth_ = float(self.bandwidth)
        self.sample_ = x
        return self

    def density(self, points) -> np.ndarray:
        check_is_fitted(self, "sample_")
        pts = np.asarray(points, dtype=float).ravel()
        h = self.bandwidth_
        shifts = (0.0,)
        if self.circular:
            period = self.high - self.low
            shifts = (-period, 0.0, period)
        out = np.zeros_like(pts)
        for s in shifts:
            u = (pts[:, None] - (self.sample_[None, :] + s)) / h
            out += np.exp(-0.5 * u * u).sum(axis=1)
        return out / (self.sample_.size * h * _SQRT_2PI)

    def score_samples(self, X):
        """Log density, as in scikit-learn's density estimators."""
        with np.errstate(divide="ignore"):
            return np.log(self.density(X))

    def grid(self) -> Tuple[np.ndarray, np.ndarray]:
        xs = np.linspace(self.low, self.high, int(self.grid_size))
        return xs, self.density(xs)


def kde(values, bandwidth: Optional[float] = None, grid: int = 360, circular: bool = False) -> List[Tuple[float, float]]:
    """Evaluate the density of ``values`` on a uniform grid over [-45, 315]."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise StatisticsError("KDE needs at least one value")
    est = AngleKDE(bandwidth=bandwidth, grid_size=grid, circular=circular).fit(values)
    xs, ys = est.grid()
    return list(zip(xs.tolist(), ys.tolist()))
