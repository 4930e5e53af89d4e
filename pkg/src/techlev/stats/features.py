"""Release-interval regression features.

Columns: ``log(rel_interval_prev + 1)``, ``log(lambda_dir)``, ``log(rho)``,
``cos(theta - 45deg)``, ``sin(theta)``; response ``log(rel_interval + 1)``.
Natural logarithms throughout.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.pipeline import Pipeline
from sklearn.utils.validation import check_array, check_is_fitted

from ..exceptions import StatisticsError
from .ols import OLSRegressor

RAW_COLUMNS = ("rel_interval_prev", "lambda_dir", "rho", "theta")
FEATURE_NAMES = ("log_rel_interval_prev", "log_lambda_dir", "log_rho", "cos_theta_minus_45", "sin_theta")


class ReleaseIntervalFeatures(TransformerMixin, BaseEstimator):
    """Map raw ``[rel_interval_prev, lambda_dir, rho, theta]`` rows to the
    regression columns. Stateless; ``fit`` only validates the width."""

    def fit(self, X, y=None):
        X = check_array(X, dtype=float)
        if X.shape[1] != len(RAW_COLUMNS):
            raise ValueError(f"expected columns {RAW_COLUMNS}, got {X.shape[1]} columns")
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        prev, lam, rho, theta = X.T
        if np.any(prev < 0):
            raise ValueError("rel_interval_prev must be non-negative")
        if np.any(lam <= 0) or np.any(rho <= 0):
            raise ValueError("lambda_dir and rho must be positive (log undefined)")
        rad = np.radians(theta)
        return np.column_stack([
            np.log1p(prev),
            np.log(lam),
            np.log(rho),
            np.cos(rad - np.radians(45.0)),
            np.sin(rad),
        ])

    def get_feature_names_out(self, input_features=None):
        return np.asarray(FEATURE_NAMES, dtype=object)


def make_release_interval_model() -> Pipeline:
    """features -> OLS, fit on raw columns and ``log(rel_interval + 1)``."""
    return Pipeline([
        ("features", ReleaseIntervalFeatures()),
        ("ols", OLSRegressor(feature_names=list(FEATURE_NAMES))),
    ])


@dataclass
class RegressionDataset:
    design: np.ndarray  # includes the leading intercept column
    response: np.ndarray
    names: List[str]
    raw: np.ndarray
    excluded: Dict[str, int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.response)


def build_regression_dataset(records, size_class=None) -> RegressionDataset:
    """Select usable change records and build the intercept-augmented design.

    Rows with no previous interval, ``lambda_dir == 0`` or ``rho == 0`` are
    dropped and counted in ``excluded`` (first matching reason wins).
    """
    excluded: Counter = Counter()
    rows, response = [], []
    for rec in records:
        if size_class is not None and rec.size_class != size_class:
            continue
        if rec.rel_interval_prev is None:
            excluded["no_previous_interval"] += 1
        elif rec.lambda_dir <= 0:
            excluded["zero_lambda_dir"] += 1
        elif rec.rho <= 0:
            excluded["zero_rho"] += 1
        else:
            rows.append((rec.rel_interval_prev, rec.lambda_dir, rec.rho, rec.theta))
            response.append(np.log1p(rec.rel_interval))
    if not rows:
        label = getattr(size_class, "value", size_class) or "all"
        raise StatisticsError(f"no usable records for regression ({label}); excluded: {dict(excluded)}")
    raw = np.asarray(rows, dtype=float)
    features = ReleaseIntervalFeatures().fit_transform(raw)
    design = np.column_stack([np.ones(len(rows)), features])
    return RegressionDataset(
        design=design,
        response=np.asarray(response),
        names=["intercept", *FEATURE_NAMES],
        raw=raw,
        excluded=dict(sorted(excluded.items())),
    )
