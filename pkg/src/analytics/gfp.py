"""Generalized Friendship Paradox statistics over susceptibility scores."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.errors import DataError, InvariantError, SusceptError, UsageError
from src.netbuild import FriendshipNetwork
from src.stats import CorrelationResult, spearman
from src.suscept import metric_values
from .homophily import Scores, homophily_correlation

logger = logging.getLogger(__name__)

IDENTITY_RTOL = 1e-12
DEFAULT_S_WIDTH = 0.05
GRID_COLUMNS = ["k_bin_low", "k_bin_high", "s_bin_low", "s_bin_high", "count", "holding_fraction"]


@dataclass
class EvaluatedNodes:
    """Nodes with a defined score and at least one scored friend.

    Degrees count scored friends only, i.e. they are taken in the subgraph
    induced on scored nodes.
    """

    users: List[str]
    degree: np.ndarray
    score: np.ndarray
    friend_mean: np.ndarray


def evaluated_nodes(network: FriendshipNetwork, scores: Scores, metric: str) -> EvaluatedNodes:
    values = metric_values(scores, metric)
    graph = network.graph
    users, degrees, own, friends = [], [], [], []
    for user in sorted(graph.nodes):
        s = values.get(user)
        if s is None:
            continue
        friend_scores = [values[v] for v in graph[user] if v in values]
        if not friend_scores:
            continue
        users.append(user)
        degrees.append(len(friend_scores))
        own.append(s)
        friends.append(math.fsum(friend_scores) / len(friend_scores))
    return EvaluatedNodes(
        users=users,
        degree=np.asarray(degrees, dtype=np.float64),
        score=np.asarray(own, dtype=np.float64),
        friend_mean=np.asarray(friends, dtype=np.float64),
    )


def individual_gfp(network: FriendshipNetwork, scores: Scores, metric: str) -> Tuple[Dict[str, bool], float]:
    """Whether each node's score is strictly below the plain mean of its friends'.

    Returns:
        (per-node flags, P) where P is the fraction of evaluated nodes for
        which the paradox holds, NaN when no node is evaluated
    """
    nodes = evaluated_nodes(network, scores, metric)
    holds = nodes.score < nodes.friend_mean
    flags = dict(zip(nodes.users, holds.tolist()))
    p = float(holds.mean()) if len(holds) else float("nan")
    return flags, p


def network_gfp(network: FriendshipNetwork, scores: Scores, metric: str) -> Tuple[float, float, bool]:
    """Mean score against the degree-weighted (neighbor) mean score.

    <s> averages every node with a defined score, including those without a
    scored friend; k counts scored friends, so such nodes add nothing to
    the neighbor mean.

    Returns:
        (<s>, <s>_nn, <s> < <s>_nn)

    Raises:
        DataError: no node has a defined score, or no edge joins two scored nodes
        InvariantError: <s>_nn - <s> differs from cov(k, s) / <k>
    """
    values = metric_values(scores, metric)
    graph = network.graph
    scored = [user for user in sorted(graph.nodes) if user in values]
    if not scored:
        raise DataError(f"no node of the {network.kind.value} network has a defined {metric}")
    k = np.asarray([sum(1 for v in graph[user] if v in values) for user in scored], dtype=np.float64)
    s = np.asarray([values[user] for user in scored], dtype=np.float64)
    if k.sum() == 0:
        raise DataError(f"no edge of the {network.kind.value} network joins two nodes with a defined {metric}")
    mean_s = float(s.mean())
    mean_k = float(k.mean())
    cov_ks = float(np.mean((k - mean_k) * (s - mean_s)))
    mean_s_nn = mean_s + cov_ks / mean_k

    direct = float(np.dot(k, s) / k.sum())
    scale = max(1.0, abs(direct), abs(mean_s))
    if abs(direct - mean_s_nn) > IDENTITY_RTOL * scale:
        raise InvariantError(
            "neighbor mean does not match the covariance identity",
            {"direct": direct, "via_covariance": mean_s_nn, "mean_s": mean_s, "cov_ks": cov_ks},
        )
    return mean_s, mean_s_nn, mean_s < mean_s_nn


def default_degree_bins(max_degree: int) -> List[int]:
    """Edges 1, 2, 4, ... up to the first power of two above `max_degree`."""
    edges = [1]
    while edges[-1] <= max_degree:
        edges.append(edges[-1] * 2)
    if len(edges) < 2:
        edges.append(2)
    return edges


def default_s_bins(width: float = DEFAULT_S_WIDTH) -> List[float]:
    """Edges over [0, 1] spaced by `width`; the last edge is exactly 1."""
    if not 0.0 < width <= 1.0:
        raise UsageError(f"s bin width must be in (0, 1], got {width}")
    n_bins = int(math.ceil(round(1.0 / width, 9)))
    edges = [round(i * width, 12) for i in range(n_bins)]
    return edges + [1.0]


def _check_edges(edges: Sequence[float], name: str) -> np.ndarray:
    arr = np.asarray(edges, dtype=np.float64)
    if arr.ndim != 1 or len(arr) < 2 or np.any(np.diff(arr) <= 0):
        raise UsageError(f"{name} must be at least two strictly ascending edges")
    return arr


@dataclass
class ParadoxGrid:
    """Counts and paradox-holding fractions per (degree bin, score bin) cell.

    Degree bins are half-open [low, high); score bins are half-open except
    the last, which includes its upper edge.
    """

    degree_bins: List[float]
    s_bins: List[float]
    counts: np.ndarray
    holding: np.ndarray

    @property
    def holding_fraction(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.counts > 0, self.holding / np.maximum(self.counts, 1), np.nan)

    @property
    def n_nodes(self) -> int:
        return int(self.counts.sum())

    def to_frame(self) -> pd.DataFrame:
        fractions = self.holding_fraction
        rows = []
        for i in range(len(self.degree_bins) - 1):
            for j in range(len(self.s_bins) - 1):
                rows.append({
                    "k_bin_low": self.degree_bins[i],
                    "k_bin_high": self.degree_bins[i + 1],
                    "s_bin_low": self.s_bins[j],
                    "s_bin_high": self.s_bins[j + 1],
                    "count": int(self.counts[i, j]),
                    "holding_fraction": fractions[i, j],
                })
        return pd.DataFrame(rows, columns=GRID_COLUMNS)

    def write_csv(self, path_or_buffer: Any) -> None:
        # empty cells are written as an empty field
        self.to_frame().to_csv(path_or_buffer, index=False, na_rep="")

    def to_dict(self) -> dict:
        fractions = self.holding_fraction
        return {
            "degree_bins": list(self.degree_bins),
            "s_bins": list(self.s_bins),
            "counts": self.counts.astype(int).tolist(),
            "holding_fraction": [[None if math.isnan(v) else float(v) for v in row] for row in fractions],
        }


def _bin_index(values: np.ndarray, edges: np.ndarray, closed_last: bool) -> np.ndarray:
    idx = np.searchsorted(edges, values, side="right") - 1
    if closed_last:
        idx = np.where(values == edges[-1], len(edges) - 2, idx)
    return idx


def _edge_list(edges: np.ndarray) -> List[float]:
    if np.all(edges == np.round(edges)):
        return [int(e) for e in edges]
    return [float(e) for e in edges]


def paradox_grid(
    network: FriendshipNetwork,
    scores: Scores,
    metric: str,
    degree_bins: Optional[Sequence[float]] = None,
    s_bins: Optional[Sequence[float]] = None,
) -> ParadoxGrid:
    """Paradox holding fraction per (degree, score) cell.

    Raises:
        DataError: a node falls outside the bin coverage
    """
    nodes = evaluated_nodes(network, scores, metric)
    if degree_bins is None:
        max_degree = int(nodes.degree.max()) if len(nodes.degree) else 0
        degree_bins = default_degree_bins(max_degree)
    if s_bins is None:
        s_bins = default_s_bins()
    k_edges = _check_edges(degree_bins, "degree bins")
    s_edges = _check_edges(s_bins, "score bins")

    counts = np.zeros((len(k_edges) - 1, len(s_edges) - 1), dtype=np.int64)
    holding = np.zeros_like(counts)
    if nodes.users:
        ki = _bin_index(nodes.degree, k_edges, closed_last=False)
        si = _bin_index(nodes.score, s_edges, closed_last=True)
        outside = (ki < 0) | (ki >= counts.shape[0]) | (si < 0) | (si >= counts.shape[1])
        if outside.any():
            first = int(np.flatnonzero(outside)[0])
            raise DataError(
                f"node {nodes.users[first]} (k={int(nodes.degree[first])}, "
                f"s={nodes.score[first]:.6g}) lies outside the grid"
            )
        holds = (nodes.score < nodes.friend_mean).astype(np.int64)
        np.add.at(counts, (ki, si), 1)
        np.add.at(holding, (ki, si), holds)

    return ParadoxGrid(
        degree_bins=_edge_list(k_edges),
        s_bins=[float(e) for e in s_edges],
        counts=counts,
        holding=holding,
    )


@dataclass
class GfpReport:
    """Degree/score correlation, paradox statistics and homophily for one metric."""

    kind: str
    metric: str
    rho_ks: Optional[CorrelationResult]
    P: float
    mean_s: float
    mean_s_nn: float
    network_gfp_holds: bool
    grid: ParadoxGrid
    homophily: Optional[CorrelationResult]
    n_nodes_used: int
    notes: List[str] = field(default_factory=list)
    baselines: Dict[str, dict] = field(default_factory=dict)

    def to_dict(self) -> dict:
        report = {
            "kind": self.kind,
            "metric": self.metric,
            "rho_ks": self.rho_ks.to_dict() if self.rho_ks else None,
            "P": self.P,
            "mean_s": self.mean_s,
            "mean_s_nn": self.mean_s_nn,
            "network_gfp_holds": self.network_gfp_holds,
            "grid": self.grid.to_dict(),
            "homophily": self.homophily.to_dict() if self.homophily else None,
            "n_nodes_used": self.n_nodes_used,
            "notes": list(self.notes),
        }
        report.update(self.baselines)
        return report


def gfp_report(
    network: FriendshipNetwork,
    scores: Scores,
    metric: str,
    s_width: float = DEFAULT_S_WIDTH,
) -> GfpReport:
    """Assemble every paradox statistic for one network and metric.

    Correlations that cannot be computed (too few nodes, constant input)
    are reported as null with a note instead of failing the report.
    """
    values = metric_values(scores, metric)
    nodes = evaluated_nodes(network, values, metric)
    notes: List[str] = []

    _, p = individual_gfp(network, values, metric)
    mean_s, mean_s_nn, holds = network_gfp(network, values, metric)
    grid = paradox_grid(network, values, metric, s_bins=default_s_bins(s_width))

    rho_ks: Optional[CorrelationResult] = None
    try:
        rho_ks = spearman(nodes.degree, nodes.score)
    except SusceptError as e:
        notes.append(f"rho_ks undefined: {e}")

    homophily: Optional[CorrelationResult] = None
    try:
        homophily = homophily_correlation(network, values, metric)
    except SusceptError as e:
        notes.append(f"homophily undefined: {e}")

    for note in notes:
        logger.warning("%s/%s: %s", network.kind.value, metric, note)

    expected = p * len(nodes.users)
    if abs(float((grid.holding).sum()) - expected) > 1e-9 * max(1.0, expected):
        raise InvariantError("grid holding counts disagree with P", {"P": p, "grid_holding": int(grid.holding.sum())})

    return GfpReport(
        kind=network.kind.value,
        metric=metric,
        rho_ks=rho_ks,
        P=p,
        mean_s=mean_s,
        mean_s_nn=mean_s_nn,
        network_gfp_holds=holds,
        grid=grid,
        homophily=homophily,
        n_nodes_used=len(nodes.users),
        notes=notes,
    )
