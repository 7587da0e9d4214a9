"""susceptinet: susceptibility scores and the generalized friendship paradox."""

from src.config import Config
from src.errors import DataError, InvariantError, SusceptError, UsageError

__version__ = Config.VERSION

__all__ = ['Config', 'DataError', 'InvariantError', 'SusceptError', 'UsageError', '__version__']
