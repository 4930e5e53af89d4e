"""Ordinary least squares with classical inference.

``ols_fit`` is the kernel: pivoted QR for the solve, sigma^2 (X'X)^-1
for the covariance, Student-t for two-sided p-values. ``OLSRegressor``
wraps it as a scikit-learn regressor.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy import linalg, stats
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from ..exceptions import StatisticsError


@dataclass
class RegressionResult:
    names: List[str]
    estimates: List[float]
    std_errors: List[float]
    t_stats: List[float]
    p_values: List[float]
    r_squared: float
    adj_r_squared: float
    rmse: float
    n: int

    def coefficient(self, name: str) -> float:
        return self.estimates[self.names.index(name)]

    def to_dict(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        """Aligned-column text rendering."""
        width = max(len(n) for n in self.names + ["coefficient"])
        lines = [f"{'coefficient':<{width}}  {'estimate':>12} {'std.err.':>12} {'tStat':>10} {'p-value':>11}"]
        for row in zip(self.names, self.estimates, self.std_errors, self.t_stats, self.p_values):
            lines.append(f"{row[0]:<{width}}  {row[1]:>12.6g} {row[2]:>12.6g} {row[3]:>10.4g} {row[4]:>11.4g}")
        lines.append(f"n={self.n}  R2={self.r_squared:.4f}  adjR2={self.adj_r_squared:.4f}  RMSE={self.rmse:.4f}")
        return "\n".join(lines)


def _has_constant_column(X: np.ndarray) -> bool:
    return bool(np.any(np.all(X == X[:1], axis=0) & (X[0] != 0)))


def ols_fit(design, response, names: Optional[Sequence[str]] = None) -> RegressionResult:
    """Fit ``response ~ design`` (the design carries its own intercept column)."""
    X = np.asarray(design, dtype=float)
    y = np.asarray(response, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ValueError(f"design {X.shape} and response {y.shape} do not line up")
    n, k = X.shape
    names = list(names) if names is not None else [f"x{j}" for j in range(k)]
    if len(names) != k:
        raise ValueError("one name per design column required")
    if n <= k:
        raise StatisticsError(f"need more rows than predictors (n={n}, k={k})")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise StatisticsError("design or response contains non-finite values")

    Q, R, piv = linalg.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = max(n, k) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
    rank = int(np.sum(diag > tol))
    if rank < k:
        collinear = sorted(names[j] for j in piv[rank:])
        raise StatisticsError("rank-deficient design; collinear columns: " + ", ".join(collinear))

    beta_p = linalg.solve_triangular(R, Q.T @ y)
    beta = np.empty(k)
    beta[piv] = beta_p

    resid = y - X @ beta
    ssr = float(resid @ resid)
    dof = n - k
    sigma2 = ssr / dof
    R_inv = linalg.solve_triangular(R, np.eye(k))
    cov_p = sigma2 * (R_inv @ R_inv.T)
    se = np.empty(k)
    se[piv] = np.sqrt(np.diag(cov_p))

    with np.errstate(divide="ignore", invalid="ignore"):
        t = beta / se
    t = np.where(se == 0, np.where(beta == 0, 0.0, np.sign(beta) * np.inf), t)
    p = 2.0 * stats.t.sf(np.abs(t), dof)

    if _has_constant_column(X):
        sst = float(np.sum((y - y.mean()) ** 2))
        dof_total = n - 1
    else:
        sst = float(y @ y)
        dof_total = n
    r2 = 1.0 - ssr / sst if sst > 0 else (1.0 if ssr == 0 else 0.0)
    r2 = min(max(r2, 0.0), 1.0)
    adj = 1.0 - (1.0 - r2) * dof_total / dof

    return RegressionResult(
        names=names,
        estimates=beta.tolist(),
        std_errors=se.tolist(),
        t_stats=t.tolist(),
        p_values=p.tolist(),
        r_squared=r2,
        adj_r_squared=adj,
        rmse=float(np.sqrt(sigma2)),
        n=n,
    )


class OLSRegressor(RegressorMixin, BaseEstimator):
    """Least-squares regressor exposing the full inference table as ``result_``.

    Parameters
    ----------
    fit_intercept : bool, default=True
        Prepend a column of ones before fitting.
    feature_names : sequence of str, optional
        Names used in ``result_``; taken from the input columns if omitted.
    """

    def __init__(self, fit_intercept=True, feature_names=None):
        self.fit_intercept = fit_intercept
        self.feature_names = feature_names

    def fit(self, X, y):
        names_in = getattr(X, "columns", None)
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        self.n_features_in_ = X.shape[1]
        if self.feature_names is not None:
            names = list(self.feature_names)
        elif names_in is not None:
            names = [str(c) for c in names_in]
        else:
            names = [f"x{j}" for j in range(X.shape[1])]
        if self.fit_intercept:
            X = np.column_stack([np.ones(X.shape[0]), X])
            names = ["intercept"] + names
        self.result_ = ols_fit(X, y, names)
        est = np.asarray(self.result_.estimates)
        if self.fit_intercept:
            self.intercept_, self.coef_ = float(est[0]), est[1:]
        else:
            self.intercept_, self.coef_ = 0.0, est
        return self

    def predict(self, X):
        check_is_fitted(self, "result_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return X @ self.coef_ + self.intercept_


def payoff_ratio(Lambda: float, beta: float) -> float:
    """Ratio of (release interval + 1) between two libraries whose leverage
    differs by the factor ``Lambda``, given the log-leverage coefficient."""
    if not Lambda > 0:
        raise ValueError(f"leverage factor must be positive, got {Lambda!r}")
    return float(Lambda) ** float(beta)
