"""Per-user exposure and adoption histories."""

import bisect
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from src.errors import DataError
from src.ingest import SECONDS_PER_DAY, CorpusWindow, InteractionEvent

logger = logging.getLogger(__name__)


@dataclass
class UserHistory:
    """Exposure set E_u and adoption sets A_u of one target user."""

    user: str
    first_interaction: Dict[str, int] = field(default_factory=dict)
    exposures: Dict[str, int] = field(default_factory=dict)
    adoptions: Dict[str, int] = field(default_factory=dict)
    adoptions_all: Dict[str, int] = field(default_factory=dict)


class AuthorIndex:
    """Read-only author -> (timestamps, url tuples) index over sorted events."""

    def __init__(self, events: Iterable[InteractionEvent]):
        timestamps: Dict[str, List[int]] = defaultdict(list)
        urls: Dict[str, List[Tuple[str, ...]]] = defaultdict(list)
        for event in events:
            timestamps[event.author].append(event.timestamp)
            urls[event.author].append(event.urls)
        self._timestamps = dict(timestamps)
        self._urls = dict(urls)

    def posts_after(self, author: str, t0: int):
        """(timestamp, urls) of every event by `author` strictly after t0."""
        times = self._timestamps.get(author)
        if not times:
            return
        start = bisect.bisect_right(times, t0)
        urls = self._urls[author]
        for i in range(start, len(times)):
            yield times[i], urls[i]


def check_sorted(events: Sequence[InteractionEvent]) -> None:
    """Raise DataError unless timestamps are non-decreasing."""
    for prev, cur in zip(events, events[1:]):
        if cur.timestamp < prev.timestamp:
            raise DataError(
                f"events are not time-sorted: {cur.event_id} at {cur.timestamp} "
                f"follows {prev.event_id} at {prev.timestamp}"
            )


def resolve_window(
    events: Sequence[InteractionEvent],
    buffer_days: int = 60,
    start: Optional[int] = None,
    end: Optional[int] = None,
) -> CorpusWindow:
    """Observation window; start/end default to the first/last event time."""
    if (start is None or end is None) and not events:
        raise DataError("cannot infer a corpus window from an empty event log")
    if start is None:
        start = min(event.timestamp for event in events)
    if end is None:
        end = max(event.timestamp for event in events)
    return CorpusWindow(start=start, buffer_end=start + buffer_days * SECONDS_PER_DAY, end=end)


def _in_window(events: Sequence[InteractionEvent], window: CorpusWindow) -> List[InteractionEvent]:
    return [event for event in events if window.contains(event.timestamp)]


def build_exposure_index(
    events: Sequence[InteractionEvent],
    targets: Set[str],
    window: CorpusWindow,
    histories: Optional[Dict[str, UserHistory]] = None,
) -> Dict[str, UserHistory]:
    """Populate first interactions and exposures for every target user.

    A target is exposed to every URL a source posts strictly after the
    target's first retweet, quote or reply of that source.

    Raises:
        DataError: events are not time-sorted
    """
    check_sorted(events)
    events = _in_window(events, window)
    histories = histories if histories is not None else {}

    for event in events:
        if event.target_author is None or event.author not in targets:
            continue
        history = histories.setdefault(event.author, UserHistory(user=event.author))
        # sorted input: the first occurrence is the earliest
        history.first_interaction.setdefault(event.target_author, event.timestamp)

    index = AuthorIndex(events)
    for user in targets:
        history = histories.setdefault(user, UserHistory(user=user))
        exposures = history.exposures
        for source, t0 in history.first_interaction.items():
            for timestamp, urls in index.posts_after(source, t0):
                for url in urls:
                    seen = exposures.get(url)
                    if seen is None or timestamp < seen:
                        exposures[url] = timestamp

    logger.debug("Built exposure index for %d targets", len(targets))
    return histories


def build_adoption_sets(
    events: Sequence[InteractionEvent],
    targets: Set[str],
    window: CorpusWindow,
    histories: Optional[Dict[str, UserHistory]] = None,
) -> Dict[str, UserHistory]:
    """Populate full-window and post-buffer adoptions for every target user."""
    check_sorted(events)
    histories = histories if histories is not None else {}
    for user in targets:
        histories.setdefault(user, UserHistory(user=user))

    for event in _in_window(events, window):
        if event.author not in targets:
            continue
        history = histories[event.author]
        for url in event.urls:
            history.adoptions_all.setdefault(url, event.timestamp)
            if event.timestamp > window.buffer_end:
                history.adoptions.setdefault(url, event.timestamp)

    return histories


def build_histories(
    events: Sequence[InteractionEvent],
    targets: Set[str],
    window: CorpusWindow,
) -> Dict[str, UserHistory]:
    """Exposures and adoptions for every target user."""
    histories = build_exposure_index(events, targets, window)
    return build_adoption_sets(events, targets, window, histories)
