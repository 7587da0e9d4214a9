"""Random search over forest hyper-parameters with k-fold cross-validation."""

import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.errors import DataError, SusceptError
from .features import kfold_indices
from .forest import ForestParams, cross_val_r2

logger = logging.getLogger(__name__)

N_ESTIMATORS_GRID = list(range(100, 1001, 50))
MAX_DEPTH_GRID: List[Optional[int]] = list(range(10, 101, 10)) + [None]
MIN_SAMPLES_SPLIT_GRID = [2, 5, 10]
MIN_SAMPLES_LEAF_GRID = [1, 2, 4]


def sample_settings(
    n_columns: int,
    n_settings: int,
    seed: int = 0,
    n_estimators_grid: Optional[Sequence[int]] = None,
) -> List[ForestParams]:
    """Draw parameter tuples uniformly from the search grid."""
    rng = np.random.default_rng(seed)
    estimators = list(n_estimators_grid or N_ESTIMATORS_GRID)
    settings = []
    for _ in range(n_settings):
        settings.append(ForestParams(
            n_estimators=int(estimators[rng.integers(len(estimators))]),
            max_features=int(rng.integers(1, n_columns + 1)),
            max_depth=MAX_DEPTH_GRID[rng.integers(len(MAX_DEPTH_GRID))],
            min_samples_split=int(MIN_SAMPLES_SPLIT_GRID[rng.integers(len(MIN_SAMPLES_SPLIT_GRID))]),
            min_samples_leaf=int(MIN_SAMPLES_LEAF_GRID[rng.integers(len(MIN_SAMPLES_LEAF_GRID))]),
            seed=seed,
        ))
    return settings


def search_candidates(
    X: np.ndarray,
    y: np.ndarray,
    n_settings: int = 100,
    folds: int = 5,
    seed: int = 0,
    n_jobs: int = 1,
    n_estimators_grid: Optional[Sequence[int]] = None,
) -> Dict[str, Any]:
    """Score sampled settings by mean CV R² and pick the best.

    Returns:
        Dictionary containing:
            - 'best': Best candidate dict
            - 'candidates': All candidates list
    """
    kfold_indices(len(y), folds, seed)
    candidates = []
    for i, params in enumerate(sample_settings(X.shape[1], n_settings, seed, n_estimators_grid)):
        try:
            score = cross_val_r2(X, y, params, folds, seed, n_jobs)
            candidates.append({'params': params, 'score': score, 'error': None})
        except SusceptError as e:
            candidates.append({'params': params, 'score': float('-inf'), 'error': str(e)})
        logger.debug("Setting %d/%d: %s -> %s", i + 1, n_settings, params, candidates[-1]['score'])

    valid_candidates = [c for c in candidates if not c['error']]
    if valid_candidates:
        best = max(valid_candidates, key=lambda c: c['score'])
    else:
        raise DataError(f"every sampled setting failed: {candidates[0]['error']}")

    return {
        'best': best,
        'candidates': candidates,
    }


def random_search(
    X: np.ndarray,
    y: np.ndarray,
    n_settings: int = 100,
    folds: int = 5,
    seed: int = 0,
    n_jobs: int = 1,
    n_estimators_grid: Optional[Sequence[int]] = None,
) -> ForestParams:
    """Parameter tuple with the highest mean cross-validated R²."""
    result = search_candidates(X, y, n_settings, folds, seed, n_jobs, n_estimators_grid)
    best = result['best']
    logger.info("Random search picked %s (CV R²=%.4f)", best['params'], best['score'])
    return best['params']
