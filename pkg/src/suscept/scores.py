"""IAR/SAR susceptibility scores and the tabular ScoreTable."""

import logging
import math
from dataclasses import dataclass
from typing import IO, Dict, Iterable, Mapping, Optional, Union

import numpy as np
import pandas as pd

from src.errors import DataError, InvariantError
from src.ingest import CorpusWindow, UserMeta
from src.stats import CorrelationResult, spearman
from .history import UserHistory

logger = logging.getLogger(__name__)

METRICS = ("iar", "sar")
META_COLUMNS = ["followers_count", "friends_count", "statuses_count", "favorites_count"]
SCORE_COLUMNS = [
    "user", "iar", "sar", "n_exposed", "n_adopted", "n_influence_driven",
] + META_COLUMNS

ScoreTable = pd.DataFrame


@dataclass(frozen=True)
class SusceptibilityScore:
    """IAR and SAR of one user; None marks an undefined metric."""

    user: str
    iar: Optional[float]
    sar: Optional[float]
    n_exposed: int
    n_adopted: int
    n_influence_driven: int


def compute_scores(history: UserHistory, window: CorpusWindow) -> SusceptibilityScore:
    """IAR = |E ∩ A| / |E| and SAR = 1 - |E ∩ A| / |A|.

    A URL is influence-driven when its earliest exposure strictly precedes
    its earliest post-buffer adoption.
    """
    for url, timestamp in history.adoptions.items():
        if timestamp <= window.buffer_end:
            raise InvariantError(
                f"adoption of {url} by {history.user} at {timestamp} is inside the buffer",
                {"buffer_end": window.buffer_end},
            )

    exposures = history.exposures
    n_influence = sum(
        1 for url, adopted_at in history.adoptions.items()
        if url in exposures and exposures[url] < adopted_at
    )
    n_exposed = len(exposures)
    n_adopted = len(history.adoptions)

    iar = n_influence / n_exposed if n_exposed else None
    sar = 1.0 - n_influence / n_adopted if n_adopted else None
    return SusceptibilityScore(
        user=history.user,
        iar=iar,
        sar=sar,
        n_exposed=n_exposed,
        n_adopted=n_adopted,
        n_influence_driven=n_influence,
    )


def score_table(
    scores: Iterable[SusceptibilityScore],
    metadata: Optional[Mapping[str, UserMeta]] = None,
) -> ScoreTable:
    """Join scores with user metadata; one row per user, sorted by user id."""
    metadata = metadata or {}
    rows = []
    for score in scores:
        meta = metadata.get(score.user)
        row = {
            "user": score.user,
            "iar": np.nan if score.iar is None else score.iar,
            "sar": np.nan if score.sar is None else score.sar,
            "n_exposed": score.n_exposed,
            "n_adopted": score.n_adopted,
            "n_influence_driven": score.n_influence_driven,
        }
        for column in META_COLUMNS:
            row[column] = getattr(meta, column) if meta is not None else None
        rows.append(row)

    table = pd.DataFrame(rows, columns=SCORE_COLUMNS)
    return _normalise(table)


def _normalise(table: pd.DataFrame) -> ScoreTable:
    table = table.astype({"user": str, "iar": "float64", "sar": "float64"})
    for column in ["n_exposed", "n_adopted", "n_influence_driven"] + META_COLUMNS:
        table[column] = table[column].astype("Int64")
    return table.sort_values("user", kind="mergesort").reset_index(drop=True)


def write_score_table(table: ScoreTable, path_or_buffer: Union[str, IO[str]]) -> None:
    table.to_csv(path_or_buffer, index=False, columns=SCORE_COLUMNS, na_rep="")


def read_score_table(path_or_buffer: Union[str, IO[str]]) -> ScoreTable:
    table = pd.read_csv(path_or_buffer, dtype={"user": str}, keep_default_na=True)
    missing = [c for c in SCORE_COLUMNS if c not in table.columns]
    if missing:
        raise DataError(f"score table is missing columns: {', '.join(missing)}")
    return _normalise(table[SCORE_COLUMNS])


def metric_values(scores: Union[ScoreTable, Mapping[str, float]], metric: str) -> Dict[str, float]:
    """Defined values of one metric keyed by user.

    Accepts a ScoreTable or a plain user -> value mapping (already one metric).
    """
    if isinstance(scores, pd.DataFrame):
        if metric not in METRICS:
            raise DataError(f"unknown metric {metric!r}; expected one of {METRICS}")
        column = scores[metric]
        mask = column.notna()
        return dict(zip(scores.loc[mask, "user"], column[mask].astype(float)))
    return {
        user: float(value) for user, value in scores.items()
        if value is not None and not (isinstance(value, float) and math.isnan(value))
    }


def metric_correlation(table: ScoreTable) -> CorrelationResult:
    """Spearman correlation between IAR and SAR over users with both defined."""
    both = table.dropna(subset=["iar", "sar"])
    return spearman(both["iar"].to_numpy(), both["sar"].to_numpy())
