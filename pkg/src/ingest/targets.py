"""URL filtering, target-user selection and corpus statistics."""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Set

from src.errors import UsageError
from .events import EventKind, InteractionEvent

logger = logging.getLogger(__name__)


def filter_url_events(events: Sequence[InteractionEvent]) -> List[InteractionEvent]:
    """Keep the events carrying at least one URL, in their original order."""
    kept = [event for event in events if event.urls]
    logger.info("URL filter kept %d of %d events (%d dropped)", len(kept), len(events), len(events) - len(kept))
    return kept


def url_share_counts(events: Iterable[InteractionEvent]) -> Counter:
    """URL instances authored per user, summed over events of every kind."""
    counts: Counter = Counter()
    for event in events:
        counts[event.author] += len(event.urls)
    return counts


def select_target_users(events: Sequence[InteractionEvent], threshold: int = 10) -> Set[str]:
    """Users who shared at least `threshold` URL instances over the whole window.

    Raises:
        UsageError: threshold is not positive
    """
    if threshold <= 0:
        raise UsageError(f"threshold must be positive, got {threshold}")
    counts = url_share_counts(events)
    targets = {user for user, n in counts.items() if n >= threshold}
    logger.info("Selected %d target users at threshold %d", len(targets), threshold)
    return targets


@dataclass
class CorpusSummary:
    """Corpus statistics: volume by event kind, users and target users."""

    n_events: int
    n_url_events: int
    n_users: int
    n_targets: int
    threshold: int
    url_events_by_kind: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n_events": self.n_events,
            "n_url_events": self.n_url_events,
            "n_users": self.n_users,
            "n_targets": self.n_targets,
            "threshold": self.threshold,
            "url_events_by_kind": dict(self.url_events_by_kind),
        }


def corpus_summary(
    all_events: Sequence[InteractionEvent],
    url_events: Sequence[InteractionEvent],
    targets: Set[str],
    threshold: int,
) -> CorpusSummary:
    """Summarise a corpus after URL filtering and target selection."""
    by_kind = Counter(event.kind.value for event in url_events)
    users = {event.author for event in url_events}
    return CorpusSummary(
        n_events=len(all_events),
        n_url_events=len(url_events),
        n_users=len(users),
        n_targets=len(targets),
        threshold=threshold,
        url_events_by_kind={kind.value: by_kind.get(kind.value, 0) for kind in EventKind},
    )
