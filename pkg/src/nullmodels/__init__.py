"""Null-model randomizations and significance summaries."""

from .distribution import (
    BASELINE_KEYS,
    STATISTICS,
    NullConfig,
    NullModelFactory,
    NullModelKind,
    NullSummary,
    empirical_p_value,
    null_distribution,
)
from .rewire import (
    EdgeSwapModel,
    NeighborReassignModel,
    NullModel,
    degree_preserving_rewire,
    random_neighbor_reassign,
)

__all__ = [
    'BASELINE_KEYS',
    'STATISTICS',
    'EdgeSwapModel',
    'NeighborReassignModel',
    'NullConfig',
    'NullModel',
    'NullModelFactory',
    'NullModelKind',
    'NullSummary',
    'degree_preserving_rewire',
    'empirical_p_value',
    'null_distribution',
    'random_neighbor_reassign',
]
