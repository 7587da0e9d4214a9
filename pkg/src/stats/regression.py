"""Least-squares primitives: simple regression with coefficient tests and the
multiple-regression R² used for variance inflation factors."""

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from src.errors import ConstantInputError, DataError, InsufficientDataError
from .special import t_two_sided_p


@dataclass(frozen=True)
class OlsResult:
    """Fit of y = intercept + slope * x."""

    intercept: float
    slope: float
    r_squared: float
    p_intercept: float
    p_slope: float
    se_intercept: float
    se_slope: float
    n: int

    def to_dict(self) -> dict:
        return asdict(self)

    def predict(self, x: Sequence[float]) -> np.ndarray:
        return self.intercept + self.slope * np.asarray(x, dtype=np.float64)


def _coefficient_p(estimate: float, se: float, df: int) -> float:
    if se == 0.0:
        return 0.0 if estimate != 0.0 else 1.0
    return t_two_sided_p(estimate / se, df)


def ols_simple(x: Sequence[float], y: Sequence[float]) -> OlsResult:
    """Ordinary least squares with one regressor and an intercept.

    Args:
        x: regressor values
        y: response values

    Returns:
        OlsResult with estimates, R² = 1 - SSE/SST and t-test p-values

    Raises:
        InsufficientDataError: fewer than 3 observations
        ConstantInputError: x has zero variance
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(x) != len(y):
        raise DataError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 3:
        raise InsufficientDataError(f"regression needs at least 3 observations, got {n}")

    x_mean = x.mean()
    y_mean = y.mean()
    xc = x - x_mean
    sxx = float(np.dot(xc, xc))
    if sxx == 0.0:
        raise ConstantInputError("regressor is constant")

    slope = float(np.dot(xc, y - y_mean)) / sxx
    intercept = float(y_mean - slope * x_mean)
    residuals = y - (intercept + slope * x)
    sse = float(np.dot(residuals, residuals))
    yc = y - y_mean
    sst = float(np.dot(yc, yc))
    r_squared = 1.0 - sse / sst if sst > 0.0 else 0.0

    df = n - 2
    s2 = sse / df
    se_slope = math.sqrt(s2 / sxx)
    se_intercept = math.sqrt(s2 * (1.0 / n + x_mean * x_mean / sxx))

    return OlsResult(
        intercept=intercept,
        slope=slope,
        r_squared=r_squared,
        p_intercept=_coefficient_p(intercept, se_intercept, df),
        p_slope=_coefficient_p(slope, se_slope, df),
        se_intercept=se_intercept,
        se_slope=se_slope,
        n=n,
    )


def ols_r_squared(X: np.ndarray, y: Sequence[float]) -> float:
    """R² of regressing `y` on the columns of `X` plus an intercept."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    design = np.column_stack([np.ones(len(y)), X])
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    residuals = y - design @ coef
    yc = y - y.mean()
    sst = float(np.dot(yc, yc))
    if sst == 0.0:
        raise ConstantInputError("response is constant")
    return 1.0 - float(np.dot(residuals, residuals)) / sst


def r2_score(y_true: Sequence[float], y_pred: Sequence[float]) -> float:
    """Coefficient of determination of predictions against observations.

    Raises:
        ConstantInputError: observations have zero variance (R² undefined)
    """
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    yc = y_true - y_true.mean()
    sst = float(np.dot(yc, yc))
    if sst == 0.0:
        raise ConstantInputError("R² undefined for a constant target")
    residuals = y_true - y_pred
    return 1.0 - float(np.dot(residuals, residuals)) / sst
