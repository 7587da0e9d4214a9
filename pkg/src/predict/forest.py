"""Random forest regression: bagged CART trees with per-split feature sampling."""

import json
import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from src.config import Config
from src.errors import ConstantInputError, DataError, SusceptError, UsageError
from src.stats import r2_score
from .features import FeatureMatrix, kfold_indices, train_test_split
from .linear import compute_vif
from .report import FitReport, Regressor
from .tree import RegressionTree

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class ForestParams:
    n_estimators: int = 100
    max_features: int = 4
    max_depth: Optional[int] = None
    min_samples_split: int = 2
    min_samples_leaf: int = 1
    seed: int = 0

    @classmethod
    def for_metric(cls, metric: str, seed: int = 0) -> "ForestParams":
        return cls(seed=seed, **Config.get_forest_defaults(metric))

    def validate(self, n_columns: int) -> None:
        problems = []
        for name in ("n_estimators", "max_features", "min_samples_split", "min_samples_leaf"):
            if getattr(self, name) < 1:
                problems.append(f"{name} must be positive")
        if self.max_depth is not None and self.max_depth < 1:
            problems.append("max_depth must be positive or None")
        if self.max_features > n_columns:
            problems.append(f"max_features={self.max_features} exceeds the {n_columns} feature columns")
        if problems:
            raise UsageError("invalid forest parameters: " + "; ".join(problems))

    def to_dict(self) -> dict:
        return asdict(self)


def _fit_tree(X: np.ndarray, y: np.ndarray, params: ForestParams, seed_seq: np.random.SeedSequence) -> RegressionTree:
    rng = np.random.default_rng(seed_seq)
    rows = rng.integers(0, len(y), size=len(y))
    tree = RegressionTree(
        max_depth=params.max_depth,
        min_samples_split=params.min_samples_split,
        min_samples_leaf=params.min_samples_leaf,
        max_features=params.max_features,
    )
    return tree.fit(X[rows], y[rows], rng)


class RandomForestRegressor:
    """Mean prediction of bootstrap-trained regression trees."""

    def __init__(self, params: ForestParams, n_jobs: int = 1):
        self.params = params
        self.n_jobs = n_jobs
        self.trees: List[RegressionTree] = []
        self.n_features = 0

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RandomForestRegressor":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if len(y) == 0:
            raise DataError("cannot fit a forest on zero rows")
        self.params.validate(X.shape[1])
        self.n_features = X.shape[1]
        children = np.random.SeedSequence(self.params.seed).spawn(self.params.n_estimators)
        self.trees = Parallel(n_jobs=self.n_jobs)(
            delayed(_fit_tree)(X, y, self.params, child) for child in children
        )
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        if not self.trees:
            raise DataError("forest is not fitted")
        X = np.asarray(X, dtype=np.float64)
        total = np.zeros(len(X))
        for tree in self.trees:
            total += tree.predict(X)
        return total / len(self.trees)


def save_forest(forest: RandomForestRegressor, path: Union[str, Path], columns: Optional[Sequence[str]] = None) -> None:
    payload = {
        "format_version": FORMAT_VERSION,
        "params": forest.params.to_dict(),
        "n_features": forest.n_features,
        "columns": list(columns) if columns is not None else None,
        "trees": [tree.to_dict() for tree in forest.trees],
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")


def load_forest(path: Union[str, Path]) -> Tuple[RandomForestRegressor, Optional[List[str]]]:
    """Load a forest written by `save_forest`; returns (forest, column names)."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise DataError(f"unsupported forest format_version {version!r}")
    forest = RandomForestRegressor(ForestParams(**payload["params"]))
    forest.n_features = int(payload["n_features"])
    forest.trees = [RegressionTree.from_dict(tree) for tree in payload["trees"]]
    return forest, payload.get("columns")


def cross_val_r2(
    X: np.ndarray,
    y: np.ndarray,
    params: ForestParams,
    folds: int = 5,
    seed: int = 0,
    n_jobs: int = 1,
) -> float:
    """Mean held-out R² over seeded k folds; folds with a constant target are skipped.

    Raises:
        InsufficientDataError: fewer rows than folds
        DataError: every fold has a constant target
    """
    parts = kfold_indices(len(y), folds, seed)
    scores = []
    for k, test in enumerate(parts):
        train = np.concatenate([p for j, p in enumerate(parts) if j != k])
        forest = RandomForestRegressor(params, n_jobs=n_jobs).fit(X[train], y[train])
        try:
            scores.append(r2_score(y[test], forest.predict(X[test])))
        except ConstantInputError:
            logger.debug("Fold %d skipped: constant target", k)
    if not scores:
        raise DataError("R² undefined on every fold (constant target)")
    return float(np.mean(scores))


def permutation_importance(
    forest: Regressor,
    X: np.ndarray,
    y: np.ndarray,
    columns: Sequence[str],
    n_shuffles: int = 10,
    seed: int = 0,
    n_jobs: int = 1,
) -> Dict[str, float]:
    """Mean drop in R² when one column is shuffled, sorted descending.

    Raises:
        ConstantInputError: the evaluation target is constant
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    base = r2_score(y, forest.predict(X))
    children = np.random.SeedSequence(seed).spawn(len(columns))

    def column_importance(j: int, seed_seq: np.random.SeedSequence) -> float:
        rng = np.random.default_rng(seed_seq)
        drops = []
        for _ in range(n_shuffles):
            shuffled = X.copy()
            shuffled[:, j] = rng.permutation(shuffled[:, j])
            drops.append(base - r2_score(y, forest.predict(shuffled)))
        return float(np.mean(drops))

    values = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(column_importance)(j, child) for j, child in enumerate(children)
    )
    ranked = sorted(zip(columns, values), key=lambda item: -item[1])
    return dict(ranked)


def fit_forest(
    features: FeatureMatrix,
    params: ForestParams,
    test_frac: float = 0.2,
    seed: int = 0,
    n_shuffles: int = 10,
    n_jobs: int = 1,
) -> Tuple[FitReport, RandomForestRegressor]:
    """Train on a seeded split and report R², VIF and permutation importance.

    Raises:
        DataError: the split leaves an empty side
    """
    train, test = train_test_split(features.n_rows, test_frac, seed)
    X, y = features.X, features.y
    forest = RandomForestRegressor(params, n_jobs=n_jobs).fit(X[train], y[train])
    notes = list(features.notes)

    def safe_r2(rows: np.ndarray) -> Optional[float]:
        try:
            return r2_score(y[rows], forest.predict(X[rows]))
        except ConstantInputError as e:
            notes.append(f"R² undefined: {e}")
            return None

    r2_train = safe_r2(train)
    r2_test = safe_r2(test)

    importances = None
    if r2_test is not None:
        importances = permutation_importance(
            forest, X[test], y[test], features.columns, n_shuffles, seed, n_jobs
        )

    vif: Dict[str, float] = {}
    try:
        vif = compute_vif(X, features.columns)
    except SusceptError as e:
        notes.append(f"VIF unavailable: {e}")
    high = [name for name, v in vif.items() if v >= 5 or math.isinf(v)]
    if high:
        notes.append(f"VIF >= 5 for: {', '.join(high)}")

    for note in notes:
        logger.warning(note)
    logger.info("Forest (%s): r2_train=%s r2_test=%s", features.target, r2_train, r2_test)
    report = FitReport(
        model="forest",
        metric=features.target,
        r2_train=r2_train,
        r2_test=r2_test,
        n_train=len(train),
        n_test=len(test),
        importances=importances,
        vif=vif,
        params=params.to_dict(),
        n_dropped=features.n_dropped,
        notes=notes,
    )
    return report, forest
