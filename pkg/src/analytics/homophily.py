"""Homophily: own susceptibility against the weighted average of friends'."""

import logging
from typing import Dict, Mapping, Union

from src.errors import InsufficientDataError
from src.netbuild import FriendshipNetwork
from src.stats import CorrelationResult, pearson
from src.suscept import ScoreTable, metric_values

logger = logging.getLogger(__name__)

Scores = Union[ScoreTable, Mapping[str, float]]


def weighted_friend_average(network: FriendshipNetwork, scores: Scores, metric: str) -> Dict[str, float]:
    """Weight-averaged metric over each user's friends.

    Friends with an undefined metric are skipped; users left without any
    scorable friend are omitted.
    """
    values = metric_values(scores, metric)
    graph = network.graph
    averages = {}
    for user in graph.nodes:
        total = 0.0
        weight_sum = 0.0
        for friend, data in graph[user].items():
            s = values.get(friend)
            if s is None:
                continue
            w = data.get("weight", 1)
            total += w * s
            weight_sum += w
        if weight_sum > 0:
            averages[user] = total / weight_sum
    return averages


def homophily_correlation(network: FriendshipNetwork, scores: Scores, metric: str) -> CorrelationResult:
    """Pearson correlation between own score and weighted friend average.

    Raises:
        InsufficientDataError: fewer than 3 qualifying users
        ConstantInputError: either side is constant
    """
    values = metric_values(scores, metric)
    averages = weighted_friend_average(network, values, metric)
    users = sorted(u for u in averages if u in values)
    if len(users) < 3:
        raise InsufficientDataError(
            f"homophily needs at least 3 users with a score and a scored friend, got {len(users)}"
        )
    result = pearson([values[u] for u in users], [averages[u] for u in users])
    logger.debug("Homophily (%s, %s): r=%.4f n=%d", network.kind.value, metric, result.coefficient, result.n)
    return result
