"""Exposure/adoption reconstruction and the IAR/SAR susceptibility metrics."""

from .history import (
    AuthorIndex,
    UserHistory,
    build_adoption_sets,
    build_exposure_index,
    build_histories,
    check_sorted,
    resolve_window,
)
from .scores import (
    META_COLUMNS,
    METRICS,
    SCORE_COLUMNS,
    ScoreTable,
    SusceptibilityScore,
    compute_scores,
    metric_correlation,
    metric_values,
    read_score_table,
    score_table,
    write_score_table,
)

__all__ = [
    'AuthorIndex',
    'META_COLUMNS',
    'METRICS',
    'SCORE_COLUMNS',
    'ScoreTable',
    'SusceptibilityScore',
    'UserHistory',
    'build_adoption_sets',
    'build_exposure_index',
    'build_histories',
    'check_sorted',
    'compute_scores',
    'metric_correlation',
    'metric_values',
    'read_score_table',
    'resolve_window',
    'score_table',
    'write_score_table',
]
