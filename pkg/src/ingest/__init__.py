"""Event-log ingestion: parsing, URL filtering and target-user selection."""

from .events import (
    SECONDS_PER_DAY,
    CorpusWindow,
    EventKind,
    InteractionEvent,
    UserMeta,
    canonicalize_url,
)
from .loader import ParseSummary, parse_event_log, parse_metadata, write_event_log, write_metadata
from .targets import (
    CorpusSummary,
    corpus_summary,
    filter_url_events,
    select_target_users,
    url_share_counts,
)

__all__ = [
    'SECONDS_PER_DAY',
    'CorpusSummary',
    'CorpusWindow',
    'EventKind',
    'InteractionEvent',
    'ParseSummary',
    'UserMeta',
    'canonicalize_url',
    'corpus_summary',
    'filter_url_events',
    'parse_event_log',
    'parse_metadata',
    'select_target_users',
    'url_share_counts',
    'write_event_log',
    'write_metadata',
]
