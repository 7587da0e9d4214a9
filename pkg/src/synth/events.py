"""Synthetic event logs and metadata that reproduce planted scores.

Every node has a private feed account. The node retweets its feed once at
the window start; each later feed post is an exposure the node adopts with
probability equal to its planted IAR. Original posts of fresh URLs supply the
non-influenced adoptions that set SAR. Friends exchange one retweet each way
at the final second of the window, which creates the reciprocal tie without
creating any exposure.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.errors import DataError
from src.ingest import CorpusWindow, EventKind, InteractionEvent, UserMeta
from src.netbuild import FriendshipNetwork
from .config import IntensityParams

logger = logging.getLogger(__name__)

HELLO_URL = "https://synth.example/hello"
URL_PREFIX = "https://synth.example"


@dataclass
class EventLogReport:
    n_events: int = 0
    n_feed_posts: int = 0
    n_adoptions: int = 0
    n_spontaneous: int = 0
    spontaneous_shortfall: int = 0
    n_handshakes: int = 0
    n_padding: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def feed_id(index: int) -> str:
    return f"f{index + 1:05d}"


def _spontaneous_count(sar: float, n_influenced: int) -> Optional[int]:
    """Originals needed so that 1 - I / (I + 1 + originals) matches `sar`.

    The shared handshake URL is always one non-influenced adoption.
    """
    if sar >= 1.0:
        return None
    return max(0, int(round(sar / (1.0 - sar) * n_influenced)) - 1)


def generate_event_log(
    network: FriendshipNetwork,
    scores: pd.DataFrame,
    window: CorpusWindow,
    intensity: Optional[IntensityParams] = None,
    seed: int = 0,
) -> Tuple[List[InteractionEvent], EventLogReport]:
    """Events whose reconstruction recovers the network and the planted scores.

    Returns:
        (events sorted by (timestamp, event_id), generation report)

    Raises:
        DataError: empty network, missing scores, or a window too short for
            the adoption delays
    """
    intensity = intensity or IntensityParams()
    users = sorted(network.graph.nodes)
    if not users:
        raise DataError("cannot generate events for an empty network")
    planted = scores.set_index("user")
    missing = [u for u in users if u not in planted.index or pd.isna(planted.loc[u, "iar"]) or pd.isna(planted.loc[u, "sar"])]
    if missing:
        raise DataError(f"{len(missing)} nodes have no planted iar/sar, e.g. {missing[0]}")
    last_post = window.end - intensity.max_delay - 1
    if last_post <= window.buffer_end:
        raise DataError("window after the buffer is shorter than the maximum adoption delay")

    rng = np.random.default_rng([seed, 2])
    report = EventLogReport()
    raw: List[Tuple[int, str, str, Optional[str], Tuple[str, ...]]] = []
    with_urls = intensity.posts_scale > 0
    n_posts = int(round(intensity.exposures_per_node * intensity.posts_scale))
    handshake_at = window.end
    hello = (HELLO_URL,) if with_urls else ()

    for u, v in network.graph.edges():
        raw.append((handshake_at, EventKind.RETWEET.value, u, v, hello))
        raw.append((handshake_at, EventKind.RETWEET.value, v, u, hello))
        report.n_handshakes += 2

    if with_urls:
        for index, user in enumerate(users):
            feed = feed_id(index)
            iar = float(planted.loc[user, "iar"])
            sar = float(planted.loc[user, "sar"])
            raw.append((window.start, EventKind.RETWEET.value, user, feed, hello))

            post_times = rng.integers(window.buffer_end + 1, last_post + 1, size=n_posts)
            adopted = rng.random(n_posts) < iar
            delays = rng.integers(1, intensity.max_delay + 1, size=n_posts)
            for j, (t, hit, delay) in enumerate(zip(post_times.tolist(), adopted.tolist(), delays.tolist())):
                url = f"{URL_PREFIX}/{user}/p{j}"
                raw.append((t, EventKind.ORIGINAL.value, feed, None, (url,)))
                if hit:
                    raw.append((t + delay, EventKind.RETWEET.value, user, feed, (url,)))
            n_influenced = int(adopted.sum())
            report.n_feed_posts += n_posts
            report.n_adoptions += n_influenced

            wanted = _spontaneous_count(sar, n_influenced)
            n_orig = intensity.max_spontaneous if wanted is None else min(wanted, intensity.max_spontaneous)
            if wanted is not None:
                report.spontaneous_shortfall += wanted - n_orig
            times = rng.integers(window.buffer_end + 1, window.end, size=n_orig)
            for j, t in enumerate(times.tolist()):
                raw.append((t, EventKind.ORIGINAL.value, user, None, (f"{URL_PREFIX}/{user}/s{j}",)))
            report.n_spontaneous += n_orig

            shares = 1 + n_influenced + n_orig + network.graph.degree(user)
            for _ in range(max(0, intensity.min_shares - shares)):
                raw.append((handshake_at, EventKind.ORIGINAL.value, user, None, hello))
                report.n_padding += 1

    raw.sort()
    events = [
        InteractionEvent(
            event_id=f"e{i:09d}",
            kind=EventKind(kind),
            author=author,
            target_author=target,
            timestamp=t,
            urls=urls,
        )
        for i, (t, kind, author, target, urls) in enumerate(raw)
    ]
    report.n_events = len(events)
    if report.spontaneous_shortfall:
        logger.warning("Spontaneous posts capped at %d per node; %d short in total",
                       intensity.max_spontaneous, report.spontaneous_shortfall)
    logger.info("Generated %d events for %d nodes", len(events), len(users))
    return events, report


def generate_metadata(network: FriendshipNetwork, seed: int = 0) -> Dict[str, UserMeta]:
    """Account counters loosely scaled with degree."""
    rng = np.random.default_rng([seed, 3])
    metadata = {}
    for user in sorted(network.graph.nodes):
        k = network.graph.degree(user)
        metadata[user] = UserMeta(
            user=user,
            followers_count=int(rng.poisson(20 * k + 5)),
            friends_count=int(rng.poisson(15 * k + 5)),
            statuses_count=int(rng.poisson(200 + 50 * k)),
            favorites_count=int(rng.poisson(100 + 10 * k)),
        )
    return metadata
