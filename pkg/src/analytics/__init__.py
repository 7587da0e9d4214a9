"""Homophily and Generalized Friendship Paradox analytics."""

from .gfp import (
    GRID_COLUMNS,
    EvaluatedNodes,
    GfpReport,
    ParadoxGrid,
    default_degree_bins,
    default_s_bins,
    evaluated_nodes,
    gfp_report,
    individual_gfp,
    network_gfp,
    paradox_grid,
)
from .homophily import Scores, homophily_correlation, weighted_friend_average

__all__ = [
    'GRID_COLUMNS',
    'EvaluatedNodes',
    'GfpReport',
    'ParadoxGrid',
    'Scores',
    'default_degree_bins',
    'default_s_bins',
    'evaluated_nodes',
    'gfp_report',
    'homophily_correlation',
    'individual_gfp',
    'network_gfp',
    'paradox_grid',
    'weighted_friend_average',
]
