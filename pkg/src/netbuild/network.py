"""Reciprocal friendship networks over target users."""

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx
import pandas as pd

from src.errors import DataError, ParseError, UsageError
from src.ingest import CorpusWindow, EventKind, InteractionEvent

logger = logging.getLogger(__name__)


class NetworkKind(str, Enum):
    """Which interaction types count as a friendship tie."""

    INTERACTION = "interaction"
    RETWEET = "retweet"
    MENTION = "mention"

    @property
    def admissible(self) -> FrozenSet[EventKind]:
        return _ADMISSIBLE[self]

    @classmethod
    def parse(cls, value: Union[str, "NetworkKind"]) -> "NetworkKind":
        try:
            return cls(value)
        except ValueError:
            choices = ", ".join(kind.value for kind in cls)
            raise UsageError(f"unknown network kind {value!r}; expected one of {choices}") from None


_ADMISSIBLE = {
    NetworkKind.INTERACTION: frozenset({EventKind.RETWEET, EventKind.QUOTE, EventKind.REPLY}),
    NetworkKind.RETWEET: frozenset({EventKind.RETWEET}),
    NetworkKind.MENTION: frozenset({EventKind.QUOTE, EventKind.REPLY}),
}


@dataclass
class FriendshipNetwork:
    """Weighted undirected graph of reciprocal ties.

    Edge attribute ``weight`` holds the admissible interaction count summed
    over both directions.
    """

    kind: NetworkKind
    graph: nx.Graph
    window: Optional[CorpusWindow] = None
    n_isolated_targets: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def nodes(self) -> Set[str]:
        return set(self.graph.nodes)

    @property
    def n_nodes(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def n_edges(self) -> int:
        return self.graph.number_of_edges()

    def weight(self, u: str, v: str) -> int:
        return self.graph[u][v]["weight"]

    def sorted_edges(self) -> List[Tuple[str, str, int]]:
        """Edges as (u, v, weight) with u < v, sorted."""
        rows = []
        for u, v, w in self.graph.edges(data="weight"):
            a, b = (u, v) if u < v else (v, u)
            rows.append((a, b, w))
        rows.sort()
        return rows

    def with_graph(self, graph: nx.Graph) -> "FriendshipNetwork":
        """Same kind and window over a different topology."""
        return FriendshipNetwork(
            kind=self.kind,
            graph=graph,
            window=self.window,
            n_isolated_targets=self.n_isolated_targets,
        )

    def sidecar(self) -> dict:
        return {
            "kind": self.kind.value,
            "n_nodes": self.n_nodes,
            "n_edges": self.n_edges,
            "window": self.window.to_dict() if self.window else None,
            "n_isolated_targets": self.n_isolated_targets,
        }


def directed_counts(
    events: Iterable[InteractionEvent],
    targets: Set[str],
    kind: NetworkKind,
) -> Counter:
    """Admissible event counts per ordered (author, target_author) pair."""
    admissible = kind.admissible
    counts: Counter = Counter()
    for event in events:
        if event.kind not in admissible:
            continue
        if event.author in targets and event.target_author in targets:
            counts[(event.author, event.target_author)] += 1
    return counts


def build_friendship_network(
    events: Sequence[InteractionEvent],
    targets: Set[str],
    kind: Union[str, NetworkKind],
    window: Optional[CorpusWindow] = None,
) -> FriendshipNetwork:
    """Reciprocal friendship network of one kind.

    An edge joins u and v when each has at least one admissible event aimed
    at the other. Target users without any such tie are not nodes.

    Raises:
        UsageError: unknown kind
    """
    kind = NetworkKind.parse(kind)
    counts = directed_counts(events, targets, kind)

    graph = nx.Graph()
    for (u, v), n_uv in counts.items():
        if u > v:
            continue
        n_vu = counts.get((v, u), 0)
        if n_vu:
            graph.add_edge(u, v, weight=n_uv + n_vu)

    n_isolated = len(targets) - graph.number_of_nodes()
    logger.info(
        "Built %s network: %d nodes, %d edges (%d isolated targets dropped)",
        kind.value, graph.number_of_nodes(), graph.number_of_edges(), n_isolated,
    )
    return FriendshipNetwork(kind=kind, graph=graph, window=window, n_isolated_targets=n_isolated)


def sidecar_path(edgelist_path: Union[str, Path]) -> Path:
    return Path(edgelist_path).with_suffix(".json")


def write_network(network: FriendshipNetwork, path: Union[str, Path]) -> Path:
    """Write `u v weight` lines sorted by (u, v) plus the JSON sidecar."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as f:
        for u, v, w in network.sorted_edges():
            f.write(f"{u} {v} {w}\n")
    side = sidecar_path(path)
    side.write_text(json.dumps(network.sidecar(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return side


def read_network(path: Union[str, Path], kind: Optional[Union[str, NetworkKind]] = None) -> FriendshipNetwork:
    """Read an edge list written by `write_network`.

    The sidecar supplies kind and window; `kind` is required when it is absent.
    """
    path = Path(path)
    side = sidecar_path(path)
    meta = json.loads(side.read_text(encoding="utf-8")) if side.exists() else {}
    kind_value = meta.get("kind", kind)
    if kind_value is None:
        raise DataError(f"{path}: no sidecar found and no network kind given")

    graph = nx.Graph()
    with path.open("r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 3:
                raise ParseError(f"expected 'u v weight', got {line.strip()!r}", line_no)
            u, v, raw = parts
            try:
                weight = int(raw)
            except ValueError:
                raise ParseError(f"weight is not an integer: {raw!r}", line_no) from None
            if u == v or weight < 1:
                raise ParseError(f"invalid edge {u} {v} {weight}", line_no)
            if graph.has_edge(u, v):
                raise ParseError(f"duplicate edge {u} {v}", line_no)
            graph.add_edge(u, v, weight=weight)

    window = CorpusWindow(**meta["window"]) if meta.get("window") else None
    return FriendshipNetwork(
        kind=NetworkKind.parse(kind_value),
        graph=graph,
        window=window,
        n_isolated_targets=int(meta.get("n_isolated_targets", 0)),
    )


def network_summary(networks: Iterable[FriendshipNetwork]) -> pd.DataFrame:
    """Node and edge counts per network kind."""
    rows = [
        {
            "kind": net.kind.value,
            "n_nodes": net.n_nodes,
            "n_edges": net.n_edges,
            "n_isolated_targets": net.n_isolated_targets,
        }
        for net in networks
    ]
    return pd.DataFrame(rows, columns=["kind", "n_nodes", "n_edges", "n_isolated_targets"])


def build_all_networks(
    events: Sequence[InteractionEvent],
    targets: Set[str],
    window: Optional[CorpusWindow] = None,
) -> Dict[NetworkKind, FriendshipNetwork]:
    return {kind: build_friendship_network(events, targets, kind, window) for kind in NetworkKind}
