"""Domain records for the interaction corpus."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple
from urllib.parse import urlsplit, urlunsplit

from src.errors import DataError

SECONDS_PER_DAY = 86400
DEFAULT_BUFFER_DAYS = 60


class EventKind(str, Enum):
    """How an event relates to other users' content."""

    ORIGINAL = "original"
    RETWEET = "retweet"
    QUOTE = "quote"
    REPLY = "reply"

    @property
    def is_interaction(self) -> bool:
        return self is not EventKind.ORIGINAL


@dataclass(frozen=True)
class InteractionEvent:
    """One timestamped post, reshare, quote or reply."""

    event_id: str
    kind: EventKind
    author: str
    target_author: Optional[str]
    timestamp: int
    urls: Tuple[str, ...] = field(default_factory=tuple)

    def to_record(self) -> dict:
        return {
            "event_id": self.event_id,
            "kind": self.kind.value,
            "author": self.author,
            "target_author": self.target_author,
            "timestamp": self.timestamp,
            "urls": list(self.urls),
        }


@dataclass(frozen=True)
class UserMeta:
    """Account-level counters used as prediction features."""

    user: str
    followers_count: int
    friends_count: int
    statuses_count: int
    favorites_count: int

    def to_record(self) -> dict:
        return {
            "user": self.user,
            "followers_count": self.followers_count,
            "friends_count": self.friends_count,
            "statuses_count": self.statuses_count,
            "favorites_count": self.favorites_count,
        }


@dataclass(frozen=True)
class CorpusWindow:
    """Observation window; adoptions only count after `buffer_end`."""

    start: int
    buffer_end: int
    end: int

    def __post_init__(self):
        if not self.start < self.buffer_end <= self.end:
            raise DataError(
                f"invalid window: need start < buffer_end <= end, got "
                f"start={self.start}, buffer_end={self.buffer_end}, end={self.end}"
            )

    @classmethod
    def from_start(cls, start: int, end: int, buffer_days: int = DEFAULT_BUFFER_DAYS) -> "CorpusWindow":
        return cls(start=start, buffer_end=start + buffer_days * SECONDS_PER_DAY, end=end)

    def contains(self, timestamp: int) -> bool:
        return self.start <= timestamp <= self.end

    def to_dict(self) -> dict:
        return {"start": self.start, "buffer_end": self.buffer_end, "end": self.end}


def canonicalize_url(url: str) -> str:
    """Lowercase scheme and host, drop the fragment, keep path and query."""
    parts = urlsplit(url.strip())
    netloc = parts.netloc
    if "@" in netloc:
        userinfo, host = netloc.rsplit("@", 1)
        netloc = f"{userinfo}@{host.lower()}"
    else:
        netloc = netloc.lower()
    return urlunsplit((parts.scheme.lower(), netloc, parts.path, parts.query, ""))
