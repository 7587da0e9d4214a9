"""CART regression tree stored as flat node arrays."""

from typing import List, Optional, Tuple

import numpy as np

LEAF = -1
GAIN_EPS = 1e-12


def best_split(
    X: np.ndarray,
    y: np.ndarray,
    candidates: np.ndarray,
    min_samples_leaf: int,
) -> Optional[Tuple[int, float, float]]:
    """Variance-reducing split over the candidate columns.

    Maximises S_L²/n_L + S_R²/n_R, which is equivalent to minimising the
    summed squared error of both children. Ties go to the lowest column,
    then the lowest threshold.

    Returns:
        (column, threshold, score) or None when no admissible split exists
    """
    n = len(y)
    best: Optional[Tuple[int, float, float]] = None
    n_left = np.arange(1, n, dtype=np.float64)
    n_right = n - n_left
    total = float(y.sum())
    for column in np.sort(candidates):
        order = np.argsort(X[:, column], kind="mergesort")
        xs = X[order, column]
        left_sum = np.cumsum(y[order])[:-1]
        right_sum = total - left_sum
        valid = xs[:-1] < xs[1:]
        if min_samples_leaf > 1:
            valid &= (n_left >= min_samples_leaf) & (n_right >= min_samples_leaf)
        if not valid.any():
            continue
        scores = np.where(valid, left_sum ** 2 / n_left + right_sum ** 2 / n_right, -np.inf)
        i = int(np.argmax(scores))
        if best is None or scores[i] > best[2]:
            lo, hi = xs[i], xs[i + 1]
            threshold = (lo + hi) / 2.0
            if not lo <= threshold < hi:
                threshold = lo
            best = (int(column), float(threshold), float(scores[i]))
    return best


class RegressionTree:
    """Regression tree; ``feature[i] == -1`` marks node i as a leaf.

    Rows go left when ``x[feature] <= threshold``.
    """

    def __init__(
        self,
        max_depth: Optional[int] = None,
        min_samples_split: int = 2,
        min_samples_leaf: int = 1,
        max_features: Optional[int] = None,
    ):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.feature = np.zeros(0, dtype=np.int64)
        self.threshold = np.zeros(0)
        self.left = np.zeros(0, dtype=np.int64)
        self.right = np.zeros(0, dtype=np.int64)
        self.value = np.zeros(0)

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def fit(self, X: np.ndarray, y: np.ndarray, rng: np.random.Generator) -> "RegressionTree":
        n_cols = X.shape[1]
        k = n_cols if self.max_features is None else min(self.max_features, n_cols)
        feature: List[int] = []
        threshold: List[float] = []
        left: List[int] = []
        right: List[int] = []
        value: List[float] = []

        def new_node(rows: np.ndarray) -> int:
            feature.append(LEAF)
            threshold.append(0.0)
            left.append(LEAF)
            right.append(LEAF)
            value.append(float(y[rows].mean()))
            return len(feature) - 1

        stack = [(new_node(np.arange(len(y))), np.arange(len(y)), 0)]
        while stack:
            node, rows, depth = stack.pop()
            n = len(rows)
            if (
                (self.max_depth is not None and depth >= self.max_depth)
                or n < self.min_samples_split
                or n < 2 * self.min_samples_leaf
            ):
                continue
            ys = y[rows]
            if np.ptp(ys) == 0.0:
                continue
            candidates = rng.choice(n_cols, size=k, replace=False)
            split = best_split(X[rows], ys, candidates, self.min_samples_leaf)
            if split is None:
                continue
            column, thr, score = split
            parent = float(ys.sum()) ** 2 / n
            if score - parent <= GAIN_EPS * max(1.0, abs(parent)):
                continue
            go_left = X[rows, column] <= thr
            left_rows, right_rows = rows[go_left], rows[~go_left]
            feature[node] = column
            threshold[node] = thr
            left[node] = new_node(left_rows)
            right[node] = new_node(right_rows)
            stack.append((right[node], right_rows, depth + 1))
            stack.append((left[node], left_rows, depth + 1))

        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        node = np.zeros(len(X), dtype=np.int64)
        rows = np.arange(len(X))
        active = self.feature[node] != LEAF
        while active.any():
            idx = rows[active]
            current = node[idx]
            go_left = X[idx, self.feature[current]] <= self.threshold[current]
            node[idx] = np.where(go_left, self.left[current], self.right[current])
            active = self.feature[node] != LEAF
        return self.value[node]

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RegressionTree":
        tree = cls()
        tree.feature = np.asarray(data["feature"], dtype=np.int64)
        tree.threshold = np.asarray(data["threshold"], dtype=np.float64)
        tree.left = np.asarray(data["left"], dtype=np.int64)
        tree.right = np.asarray(data["right"], dtype=np.int64)
        tree.value = np.asarray(data["value"], dtype=np.float64)
        return tree
