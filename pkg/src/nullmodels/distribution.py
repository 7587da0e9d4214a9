"""Repeated randomizations and empirical p-values for network statistics."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Mapping

import numpy as np
from joblib import Parallel, delayed

from src.analytics import Scores, homophily_correlation, individual_gfp, network_gfp
from src.errors import InsufficientDataError, SusceptError, UsageError
from src.netbuild import FriendshipNetwork
from src.suscept import metric_values
from .rewire import EdgeSwapModel, NeighborReassignModel, NullModel

logger = logging.getLogger(__name__)


class NullModelKind(str, Enum):
    EDGE_SWAP = "edge_swap"
    NEIGHBOR_REASSIGN = "neighbor_reassign"


# report keys mirroring the two baseline columns
BASELINE_KEYS = {
    NullModelKind.EDGE_SWAP: "baseline1",
    NullModelKind.NEIGHBOR_REASSIGN: "baseline2",
}


@dataclass(frozen=True)
class NullConfig:
    model: NullModelKind = NullModelKind.EDGE_SWAP
    n_reps: int = 100
    swap_multiplier: int = 10
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "model", NullModelKind(self.model))
        if self.n_reps < 1:
            raise UsageError(f"n_reps must be >= 1, got {self.n_reps}")
        if self.swap_multiplier < 1:
            raise UsageError(f"swap_multiplier must be >= 1, got {self.swap_multiplier}")


class NullModelFactory:
    """Factory for null model instances."""

    @staticmethod
    def create(config: NullConfig) -> NullModel:
        if config.model is NullModelKind.EDGE_SWAP:
            return EdgeSwapModel(config.swap_multiplier)
        return NeighborReassignModel()

    @staticmethod
    def list_models() -> List[str]:
        return [kind.value for kind in NullModelKind]


def _homophily(network: FriendshipNetwork, values: Mapping[str, float], metric: str) -> float:
    return homophily_correlation(network, values, metric).coefficient


def _paradox_probability(network: FriendshipNetwork, values: Mapping[str, float], metric: str) -> float:
    return individual_gfp(network, values, metric)[1]


def _neighbor_mean(network: FriendshipNetwork, values: Mapping[str, float], metric: str) -> float:
    return network_gfp(network, values, metric)[1]


STATISTICS: Dict[str, Callable[[FriendshipNetwork, Mapping[str, float], str], float]] = {
    "homophily": _homophily,
    "P": _paradox_probability,
    "mean_s_nn": _neighbor_mean,
}


@dataclass(frozen=True)
class NullSummary:
    statistic: str
    model: str
    observed: float
    null_mean: float
    null_sd: float
    p_value: float
    n_reps: int
    n_failed: int

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "model": self.model,
            "observed": self.observed,
            "null_mean": self.null_mean,
            "null_sd": self.null_sd,
            "p_value": self.p_value,
            "n_reps": self.n_reps,
            "n_failed": self.n_failed,
        }


def empirical_p_value(observed: float, null_values: np.ndarray) -> float:
    """Two-sided (1 + #{|null - mean| >= |obs - mean|}) / (n + 1)."""
    center = float(null_values.mean())
    extreme = int(np.sum(np.abs(null_values - center) >= abs(observed - center)))
    return (1 + extreme) / (len(null_values) + 1)


def _replicate(model: NullModel, network: FriendshipNetwork, values, metric: str, statistic: str, seed: int) -> float:
    randomized = model.randomize(network, seed)
    try:
        return STATISTICS[statistic](randomized, values, metric)
    except SusceptError as e:
        logger.debug("Replicate seed=%d: %s undefined (%s)", seed, statistic, e)
        return math.nan


def null_distribution(
    network: FriendshipNetwork,
    scores: Scores,
    statistic: str,
    config: NullConfig,
    metric: str = "iar",
    n_jobs: int = 1,
) -> NullSummary:
    """Compare a statistic against `config.n_reps` randomized networks.

    Replicate r uses seed `config.seed + r`. Replicates where the statistic
    is undefined are dropped and counted in `n_failed`.

    Raises:
        UsageError: unknown statistic
        InsufficientDataError: the statistic is undefined on every replicate
    """
    if statistic not in STATISTICS:
        raise UsageError(f"unknown statistic {statistic!r}; expected one of {sorted(STATISTICS)}")
    values = metric_values(scores, metric)
    observed = STATISTICS[statistic](network, values, metric)
    model = NullModelFactory.create(config)

    null_values = Parallel(n_jobs=n_jobs)(
        delayed(_replicate)(model, network, values, metric, statistic, config.seed + r)
        for r in range(config.n_reps)
    )
    null_arr = np.asarray(null_values, dtype=np.float64)
    finite = null_arr[np.isfinite(null_arr)]
    n_failed = len(null_arr) - len(finite)
    if len(finite) == 0:
        raise InsufficientDataError(f"{statistic} is undefined on all {config.n_reps} {model.name} replicates")
    if n_failed:
        logger.warning("%d of %d %s replicates left %s undefined", n_failed, config.n_reps, model.name, statistic)

    summary = NullSummary(
        statistic=statistic,
        model=model.name,
        observed=float(observed),
        null_mean=float(finite.mean()),
        null_sd=float(finite.std(ddof=1)) if len(finite) > 1 else 0.0,
        p_value=empirical_p_value(observed, finite),
        n_reps=config.n_reps,
        n_failed=n_failed,
    )
    logger.info(
        "%s null for %s: observed=%.4g null_mean=%.4g p=%.4g",
        model.name, statistic, summary.observed, summary.null_mean, summary.p_value,
    )
    return summary
