"""Susceptibility prediction: friend-average regression and random forests."""

from .features import (
    FEATURE_COLUMNS,
    FeatureMatrix,
    build_feature_matrix,
    friend_averages,
    kfold_indices,
    train_test_split,
)
from .forest import (
    FORMAT_VERSION,
    ForestParams,
    RandomForestRegressor,
    cross_val_r2,
    fit_forest,
    load_forest,
    permutation_importance,
    save_forest,
)
from .linear import compute_vif, fit_friend_linear
from .report import FitReport, Regressor, compare_models
from .search import random_search, sample_settings, search_candidates
from .tree import RegressionTree, best_split

__all__ = [
    'FEATURE_COLUMNS',
    'FORMAT_VERSION',
    'FeatureMatrix',
    'FitReport',
    'ForestParams',
    'RandomForestRegressor',
    'RegressionTree',
    'Regressor',
    'best_split',
    'build_feature_matrix',
    'compare_models',
    'compute_vif',
    'cross_val_r2',
    'fit_forest',
    'fit_friend_linear',
    'friend_averages',
    'kfold_indices',
    'load_forest',
    'permutation_importance',
    'random_search',
    'sample_settings',
    'save_forest',
    'search_candidates',
    'train_test_split',
]
