"""Fit reports shared by the linear and forest predictors."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Protocol

import numpy as np


class Regressor(Protocol):
    """Anything that maps a feature matrix to predictions."""

    def predict(self, X: np.ndarray) -> np.ndarray:
        ...


@dataclass
class FitReport:
    model: str
    metric: str
    r2_train: Optional[float]
    r2_test: Optional[float]
    n_train: int
    n_test: int
    coefficients: Optional[Dict[str, Any]] = None
    importances: Optional[Dict[str, float]] = None
    vif: Dict[str, float] = field(default_factory=dict)
    params: Dict[str, Any] = field(default_factory=dict)
    n_dropped: int = 0
    notes: List[str] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        report = {
            "model": self.model,
            "metric": self.metric,
            "r2_train": self.r2_train,
            "r2_test": self.r2_test,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "coefficients": self.coefficients,
            "importances": self.importances,
            "vif": dict(self.vif),
            "params": dict(self.params),
            "n_dropped": self.n_dropped,
            "notes": list(self.notes),
        }
        report.update(self.extra)
        return report


def compare_models(linear: FitReport, forest: FitReport) -> Dict[str, Optional[float]]:
    """Test R² of both models and the forest's gain over the linear fit."""
    delta = None
    if linear.r2_test is not None and forest.r2_test is not None:
        delta = forest.r2_test - linear.r2_test
    return {
        "metric": forest.metric,
        "r2_linear_test": linear.r2_test,
        "r2_forest_test": forest.r2_test,
        "delta_r2": delta,
    }
