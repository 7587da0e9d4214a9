"""Line-delimited readers and writers for event logs and user metadata."""

import json
import logging
from dataclasses import dataclass, field
from typing import IO, Dict, Iterable, List, Tuple, Union

from src.errors import ParseError
from .events import EventKind, InteractionEvent, UserMeta, canonicalize_url

logger = logging.getLogger(__name__)

# Largest epoch second representable as a calendar date (9999-12-31T23:59:59Z).
MAX_TIMESTAMP = 253402300799

EVENT_KEYS = ("event_id", "kind", "author", "target_author", "timestamp", "urls")
META_COUNT_KEYS = ("followers_count", "friends_count", "statuses_count", "favorites_count")

Stream = Union[IO[bytes], IO[str], Iterable[Union[bytes, str]]]


@dataclass
class ParseSummary:
    """What happened while reading a line-delimited input."""

    n_lines: int = 0
    n_records: int = 0
    n_malformed: int = 0
    errors: List[str] = field(default_factory=list)

    def record_error(self, message: str, keep: int = 20) -> None:
        self.n_malformed += 1
        if len(self.errors) < keep:
            self.errors.append(message)

    def to_dict(self) -> dict:
        return {
            "n_lines": self.n_lines,
            "n_records": self.n_records,
            "n_malformed": self.n_malformed,
            "errors": list(self.errors),
        }


def _lines(stream: Stream):
    for line_no, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                yield line_no, None, f"invalid UTF-8: {e}"
                continue
        text = raw.strip()
        if text:
            yield line_no, text, None


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _require_user(record: dict, key: str) -> str:
    value = record.get(key)
    if not isinstance(value, str) or not value.strip():
        raise ValueError(f"{key} must be a non-empty string")
    if any(ch.isspace() for ch in value):
        raise ValueError(f"{key} must not contain whitespace")
    return value


def _event_from_record(record: dict) -> InteractionEvent:
    """Validate one decoded record; raises ValueError describing the problem."""
    if not isinstance(record, dict):
        raise ValueError("record is not an object")
    for key in EVENT_KEYS:
        if key not in record and key != "target_author":
            raise ValueError(f"missing {key}")

    event_id = record["event_id"]
    if not isinstance(event_id, str) or not event_id:
        raise ValueError("event_id must be a non-empty string")

    try:
        kind = EventKind(record["kind"])
    except ValueError:
        raise ValueError(f"unknown kind {record['kind']!r}")

    author = _require_user(record, "author")
    target = record.get("target_author")
    if kind is EventKind.ORIGINAL:
        if target is not None:
            raise ValueError("original events must not carry target_author")
    else:
        if target is None:
            raise ValueError("missing target_author")
        target = _require_user(record, "target_author")
        if target == author:
            raise ValueError("self-interaction (author equals target_author)")

    timestamp = record["timestamp"]
    if not _is_int(timestamp):
        raise ValueError("timestamp must be an integer")
    if timestamp < 0:
        raise ValueError("timestamp must be non-negative")

    urls = record["urls"]
    if not isinstance(urls, list) or not all(isinstance(u, str) for u in urls):
        raise ValueError("urls must be an array of strings")
    canonical: List[str] = []
    for url in urls:
        url = canonicalize_url(url)
        if url and url not in canonical:
            canonical.append(url)

    return InteractionEvent(
        event_id=event_id,
        kind=kind,
        author=author,
        target_author=target,
        timestamp=timestamp,
        urls=tuple(canonical),
    )


def parse_event_log(stream: Stream, strict: bool = True) -> Tuple[List[InteractionEvent], ParseSummary]:
    """Parse a line-delimited event log.

    Args:
        stream: binary or text stream, one JSON object per line
        strict: abort on the first malformed line instead of skipping it

    Returns:
        Events sorted by (timestamp, event_id) and the parse summary

    Raises:
        ParseError: malformed line in strict mode, duplicate event_id, or a
            timestamp beyond the representable range (these two always)
    """
    summary = ParseSummary()
    events: List[InteractionEvent] = []
    seen: Dict[str, int] = {}

    for line_no, text, decode_error in _lines(stream):
        summary.n_lines += 1
        try:
            if decode_error:
                raise ValueError(decode_error)
            try:
                record = json.loads(text)
            except json.JSONDecodeError as e:
                raise ValueError(f"invalid JSON: {e.msg}")
            if isinstance(record, dict) and _is_int(record.get("timestamp")) \
                    and record["timestamp"] > MAX_TIMESTAMP:
                raise ParseError(
                    f"timestamp {record['timestamp']} outside representable range", line_no
                )
            event = _event_from_record(record)
        except ValueError as e:
            if isinstance(e, ParseError):
                raise
            if strict:
                raise ParseError(str(e), line_no) from e
            summary.record_error(f"line {line_no}: {e}")
            continue

        if event.event_id in seen:
            raise ParseError(
                f"duplicate event_id {event.event_id!r} (first seen on line {seen[event.event_id]})",
                line_no,
            )
        seen[event.event_id] = line_no
        events.append(event)

    events.sort(key=lambda e: (e.timestamp, e.event_id))
    summary.n_records = len(events)
    if summary.n_malformed:
        logger.warning("Skipped %d malformed event lines", summary.n_malformed)
    logger.info("Parsed %d events from %d lines", summary.n_records, summary.n_lines)
    return events, summary


def parse_metadata(stream: Stream, strict: bool = True) -> Tuple[Dict[str, UserMeta], ParseSummary]:
    """Parse line-delimited user metadata; later records for a user win."""
    summary = ParseSummary()
    metadata: Dict[str, UserMeta] = {}

    for line_no, text, decode_error in _lines(stream):
        summary.n_lines += 1
        try:
            if decode_error:
                raise ValueError(decode_error)
            try:
                record = json.loads(text)
            except json.JSONDecodeError as e:
                raise ValueError(f"invalid JSON: {e.msg}")
            if not isinstance(record, dict):
                raise ValueError("record is not an object")
            user = _require_user(record, "user")
            counts = {}
            for key in META_COUNT_KEYS:
                value = record.get(key)
                if not _is_int(value) or value < 0:
                    raise ValueError(f"{key} must be a non-negative integer")
                counts[key] = value
        except ValueError as e:
            if strict:
                raise ParseError(str(e), line_no) from e
            summary.record_error(f"line {line_no}: {e}")
            continue

        if user in metadata:
            logger.warning("Duplicate metadata for user %s on line %d; keeping the later record", user, line_no)
        metadata[user] = UserMeta(user=user, **counts)

    summary.n_records = len(metadata)
    return metadata, summary


def write_event_log(events: Iterable[InteractionEvent], stream: IO[str]) -> int:
    """Write events in the format `parse_event_log` reads; returns the line count."""
    count = 0
    for event in events:
        stream.write(json.dumps(event.to_record(), sort_keys=True, ensure_ascii=False))
        stream.write("\n")
        count += 1
    return count


def write_metadata(records: Iterable[UserMeta], stream: IO[str]) -> int:
    count = 0
    for meta in records:
        stream.write(json.dumps(meta.to_record(), sort_keys=True))
        stream.write("\n")
        count += 1
    return count
