"""Feature matrices and data splits for susceptibility prediction."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd

from src.analytics import weighted_friend_average
from src.errors import DataError, InsufficientDataError, UsageError
from src.netbuild import FriendshipNetwork, NodeFeatures
from src.suscept import META_COLUMNS, METRICS, ScoreTable

logger = logging.getLogger(__name__)

FEATURE_COLUMNS = [
    "friends_iar",
    "friends_sar",
    "followers_count",
    "friends_count",
    "favorites_count",
    "statuses_count",
    "degree_centrality",
    "eigenvector_centrality",
    "clustering_coefficient",
]


@dataclass
class FeatureMatrix:
    """Complete-case design matrix; column order is FEATURE_COLUMNS unless given."""

    users: List[str]
    X: np.ndarray
    y: np.ndarray
    columns: List[str]
    target: str
    n_dropped: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def n_rows(self) -> int:
        return len(self.users)

    def frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.X, columns=self.columns)
        frame.insert(0, "user", self.users)
        frame[self.target] = self.y
        return frame

    def subset(self, rows: np.ndarray) -> "FeatureMatrix":
        return FeatureMatrix(
            users=[self.users[i] for i in rows],
            X=self.X[rows],
            y=self.y[rows],
            columns=list(self.columns),
            target=self.target,
        )


def friend_averages(network: FriendshipNetwork, scores: ScoreTable) -> Dict[str, Dict[str, float]]:
    """Weighted friend average of both metrics, keyed by metric then user."""
    return {metric: weighted_friend_average(network, scores, metric) for metric in METRICS}


def build_feature_matrix(
    scores: ScoreTable,
    network: FriendshipNetwork,
    node_feats: Mapping[str, NodeFeatures],
    metric: str,
    columns: Optional[List[str]] = None,
) -> FeatureMatrix:
    """Join scores, friend averages, metadata and network features.

    Rows with any undefined feature or target are dropped and counted.
    """
    if metric not in METRICS:
        raise UsageError(f"unknown metric {metric!r}")
    columns = list(columns or FEATURE_COLUMNS)
    averages = friend_averages(network, scores)

    frame = scores.set_index("user")
    rows = []
    for user in sorted(network.graph.nodes):
        if user not in frame.index:
            continue
        record = frame.loc[user]
        nf = node_feats.get(user)
        row = {
            "user": user,
            "friends_iar": averages["iar"].get(user, np.nan),
            "friends_sar": averages["sar"].get(user, np.nan),
            "degree_centrality": nf.degree_centrality if nf else np.nan,
            "eigenvector_centrality": nf.eigenvector_centrality if nf else np.nan,
            "clustering_coefficient": nf.clustering_coefficient if nf else np.nan,
            metric: record[metric],
        }
        for column in META_COLUMNS:
            value = record[column]
            row[column] = np.nan if pd.isna(value) else float(value)
        rows.append(row)

    table = pd.DataFrame(rows, columns=["user"] + FEATURE_COLUMNS + [metric])
    table[FEATURE_COLUMNS + [metric]] = table[FEATURE_COLUMNS + [metric]].astype("float64")
    complete = table.dropna(subset=columns + [metric])
    n_dropped = len(table) - len(complete)
    notes = []
    if n_dropped:
        notes.append(f"dropped {n_dropped} rows with undefined features or {metric}")
        logger.warning(notes[-1])

    return FeatureMatrix(
        users=complete["user"].tolist(),
        X=complete[columns].to_numpy(dtype=np.float64),
        y=complete[metric].to_numpy(dtype=np.float64),
        columns=columns,
        target=metric,
        n_dropped=n_dropped,
        notes=notes,
    )


def train_test_split(n_rows: int, test_frac: float = 0.2, seed: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """Seeded shuffle split into (train rows, test rows).

    Raises:
        DataError: either side would be empty
    """
    if not 0.0 < test_frac < 1.0:
        raise UsageError(f"test_frac must be in (0, 1), got {test_frac}")
    n_test = int(round(n_rows * test_frac))
    if n_test < 1 or n_rows - n_test < 1:
        raise DataError(f"cannot split {n_rows} rows with test fraction {test_frac}: empty split")
    order = np.random.default_rng(seed).permutation(n_rows)
    return np.sort(order[n_test:]), np.sort(order[:n_test])


def kfold_indices(n_rows: int, folds: int, seed: int = 0) -> List[np.ndarray]:
    """Seeded k-fold partition of row indices.

    Raises:
        InsufficientDataError: fewer rows than folds
    """
    if folds < 2:
        raise UsageError(f"folds must be >= 2, got {folds}")
    if n_rows < folds:
        raise InsufficientDataError(f"{folds}-fold cross-validation needs at least {folds} rows, got {n_rows}")
    order = np.random.default_rng(seed).permutation(n_rows)
    return [np.sort(chunk) for chunk in np.array_split(order, folds)]
