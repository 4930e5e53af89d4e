"""Statistical kernels used to replicate the leverage analyses."""

from .describe import CorrelationResult, describe, pearson_log
from .features import (
    FEATURE_NAMES,
    RegressionDataset,
    ReleaseIntervalFeatures,
    build_regression_dataset,
    make_release_interval_model,
)
from .kde import AngleKDE, kde, silverman_bandwidth
from .odds import (
    ContingencyTable,
    LeveragePoint,
    OddsResult,
    contingency,
    fisher_exact_p,
    max_leverage_by_vuln_count,
    odds_analysis,
)
from .ols import OLSRegressor, RegressionResult, ols_fit, payoff_ratio

__all__ = [
    "AngleKDE", "ContingencyTable", "CorrelationResult", "FEATURE_NAMES", "LeveragePoint",
    "OLSRegressor", "OddsResult", "RegressionDataset", "RegressionResult", "ReleaseIntervalFeatures",
    "build_regression_dataset", "contingency", "describe", "fisher_exact_p", "kde",
    "make_release_interval_model", "max_leverage_by_vuln_count", "odds_analysis", "ols_fit",
    "payoff_ratio", "pearson_log", "silverman_bandwidth",
]
