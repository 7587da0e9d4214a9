"""Linear prediction of a user's score from the friend average, and VIF."""

import logging
import math
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

from src.errors import ConstantInputError, InsufficientDataError, SusceptError
from src.stats import ols_r_squared, ols_simple, r2_score
from src.suscept import ScoreTable, metric_values
from .features import train_test_split
from .report import FitReport

logger = logging.getLogger(__name__)

VIF_COLLINEAR_EPS = 1e-12


def _paired(scores: Mapping[str, float], averages: Mapping[str, float]):
    users = sorted(u for u in scores if u in averages)
    x = np.asarray([averages[u] for u in users], dtype=np.float64)
    y = np.asarray([scores[u] for u in users], dtype=np.float64)
    return users, x, y


def fit_friend_linear(
    scores: ScoreTable,
    friend_avgs: Mapping[str, float],
    metric: str,
    cross_friend_avgs: Optional[Mapping[str, float]] = None,
    test_frac: float = 0.2,
    seed: int = 0,
) -> FitReport:
    """Fit s_user = b0 + b1 * s_friend_avg.

    Coefficients and p-values come from the fit on every qualifying user;
    r2_train/r2_test come from a refit on a seeded training split. When
    `cross_friend_avgs` (friends' other metric) is given, the same fit on
    that regressor is reported under `cross_metric`.

    Raises:
        InsufficientDataError: fewer than 3 qualifying users
    """
    values = metric_values(scores, metric)
    users, x, y = _paired(values, friend_avgs)
    if len(users) < 3:
        raise InsufficientDataError(f"linear fit needs at least 3 users, got {len(users)}")

    full = ols_simple(x, y)
    notes: List[str] = []
    r2_train: Optional[float] = None
    r2_test: Optional[float] = None
    n_train = n_test = 0
    try:
        train, test = train_test_split(len(users), test_frac, seed)
        n_train, n_test = len(train), len(test)
        split_fit = ols_simple(x[train], y[train])
        r2_train = split_fit.r_squared
        r2_test = r2_score(y[test], split_fit.predict(x[test]))
    except SusceptError as e:
        notes.append(f"train/test R² unavailable: {e}")
        logger.warning(notes[-1])

    extra = {}
    if cross_friend_avgs is not None:
        try:
            _, cx, cy = _paired(values, cross_friend_avgs)
            extra["cross_metric"] = ols_simple(cx, cy).to_dict()
        except SusceptError as e:
            extra["cross_metric"] = None
            notes.append(f"cross-metric fit unavailable: {e}")

    return FitReport(
        model="linear",
        metric=metric,
        r2_train=r2_train,
        r2_test=r2_test,
        n_train=n_train,
        n_test=n_test,
        coefficients=full.to_dict(),
        notes=notes,
        extra=extra,
    )


def compute_vif(X: np.ndarray, columns: Sequence[str]) -> Dict[str, float]:
    """Variance inflation factor of every column against all the others.

    A perfectly collinear column is reported as ``inf``.

    Raises:
        InsufficientDataError: fewer than columns + 2 rows
        ConstantInputError: a column is constant
    """
    X = np.asarray(X, dtype=np.float64)
    n, p = X.shape
    if n < p + 2:
        raise InsufficientDataError(f"VIF needs at least {p + 2} rows for {p} columns, got {n}")
    constant = [columns[j] for j in range(p) if np.ptp(X[:, j]) == 0.0]
    if constant:
        raise ConstantInputError(f"VIF undefined for constant columns: {', '.join(constant)}")

    vif = {}
    for j, name in enumerate(columns):
        if p == 1:
            vif[name] = 1.0
            continue
        others = np.delete(X, j, axis=1)
        r2 = ols_r_squared(others, X[:, j])
        residual = 1.0 - r2
        vif[name] = math.inf if residual < VIF_COLLINEAR_EPS else 1.0 / residual
    flagged = [name for name, v in vif.items() if math.isinf(v)]
    if flagged:
        logger.warning("Perfectly collinear columns: %s", ", ".join(flagged))
    return vif
