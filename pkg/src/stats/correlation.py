"""Pearson and Spearman correlation with t-distribution p-values."""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.errors import ConstantInputError, DataError, InsufficientDataError
from .special import t_two_sided_p


@dataclass(frozen=True)
class CorrelationResult:
    """Correlation coefficient with its two-sided p-value and sample size."""

    coefficient: float
    p_value: float
    n: int

    def to_dict(self) -> dict:
        return {"coefficient": self.coefficient, "p_value": self.p_value, "n": self.n}


def _as_pair(x: Sequence[float], y: Sequence[float]):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1:
        raise DataError("correlation inputs must be one-dimensional")
    if len(x) != len(y):
        raise DataError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 3:
        raise InsufficientDataError(f"correlation needs at least 3 pairs, got {len(x)}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DataError("correlation inputs contain non-finite values")
    return x, y


def _correlation_p_value(r: float, n: int) -> float:
    df = n - 2
    if abs(r) >= 1.0:
        return 0.0
    t = r * math.sqrt(df / ((1.0 - r) * (1.0 + r)))
    return t_two_sided_p(t, df)


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Sample Pearson correlation.

    Raises:
        DataError: length mismatch or fewer than 3 pairs
        ConstantInputError: either vector has zero variance
    """
    x, y = _as_pair(x, y)
    xm = x - x.mean()
    ym = y - y.mean()
    sxx = float(np.dot(xm, xm))
    syy = float(np.dot(ym, ym))
    if sxx == 0.0 or syy == 0.0:
        raise ConstantInputError("correlation undefined for a constant vector")
    r = float(np.dot(xm, ym)) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    return CorrelationResult(coefficient=r, p_value=_correlation_p_value(r, len(x)), n=len(x))


def midranks(values: Sequence[float]) -> np.ndarray:
    """Ranks starting at 1 with tied values sharing the mean of their positions."""
    values = np.asarray(values, dtype=np.float64)
    n = len(values)
    order = np.argsort(values, kind="mergesort")
    ordered = values[order]
    boundaries = np.flatnonzero(
        np.concatenate(([True], ordered[1:] != ordered[:-1], [True]))
    )
    starts, ends = boundaries[:-1], boundaries[1:]
    averaged = (starts + ends + 1) / 2.0
    ranks = np.empty(n, dtype=np.float64)
    ranks[order] = np.repeat(averaged, ends - starts)
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Spearman rank correlation: Pearson correlation of the midranks."""
    x, y = _as_pair(x, y)
    return pearson(midranks(x), midranks(y))
