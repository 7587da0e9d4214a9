"""Statistical kernel: correlations, p-values and regression primitives."""

from .correlation import CorrelationResult, midranks, pearson, spearman
from .regression import OlsResult, ols_r_squared, ols_simple, r2_score
from .special import betai, t_two_sided_p

__all__ = [
    'CorrelationResult',
    'OlsResult',
    'betai',
    'midranks',
    'ols_r_squared',
    'ols_simple',
    'pearson',
    'r2_score',
    'spearman',
    't_two_sided_p',
]
