"""Configuration-model graphs with rejection of self-loops and multi-edges."""

import logging
import math
import random
from collections import defaultdict
from typing import Dict, List, Set, Tuple

import networkx as nx
import numpy as np

from src.errors import DataError
from src.netbuild import FriendshipNetwork, NetworkKind
from .config import DegreeKind, SynthConfig

logger = logging.getLogger(__name__)

MAX_PARITY_RESAMPLES = 1000


def node_id(index: int) -> str:
    return f"u{index + 1:05d}"


def sample_degrees(config: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    """Degree sequence with an even sum.

    Raises:
        DataError: a regular sequence cannot be realised (k >= n or odd n*k)
    """
    n = config.n_nodes
    dist = config.degree_dist

    if dist.kind is DegreeKind.REGULAR:
        if dist.k >= n:
            raise DataError(f"regular degree {dist.k} needs more than {n} nodes")
        if (n * dist.k) % 2:
            raise DataError(f"regular({dist.k}) on {n} nodes has an odd degree sum")
        return np.full(n, dist.k, dtype=np.int64)

    if dist.kind is DegreeKind.POWERLAW:
        k_max = dist.k_max if dist.k_max is not None else int(math.floor(math.sqrt(n)))
        k_max = min(k_max, n - 1)
        if k_max < dist.k_min:
            raise DataError(f"powerlaw support is empty: k_min={dist.k_min} > k_max={k_max}")
        support = np.arange(dist.k_min, k_max + 1)
        weights = support.astype(np.float64) ** -dist.gamma
        probs = weights / weights.sum()

        def draw(size: int) -> np.ndarray:
            return rng.choice(support, size=size, p=probs)
    else:
        def draw(size: int) -> np.ndarray:
            return np.clip(rng.poisson(dist.lam, size=size), 1, n - 1)

    degrees = draw(n).astype(np.int64)
    for _ in range(MAX_PARITY_RESAMPLES):
        if degrees.sum() % 2 == 0:
            break
        i = int(rng.integers(n))
        degrees[i] = draw(1)[0]
    else:
        raise DataError("could not draw a degree sequence with an even sum")
    return degrees


def _key(a: int, b: int) -> Tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _suitable(edges: Set[Tuple[int, int]], potential_edges: Dict[int, int]) -> bool:
    # True while some pair of leftover stubs can still form a new edge
    if not potential_edges:
        return True
    for s1 in potential_edges:
        for s2 in potential_edges:
            if s1 == s2:
                break
            if _key(s1, s2) not in edges:
                return True
    return False


def _repair(
    a: int,
    b: int,
    edges: Set[Tuple[int, int]],
    edge_list: List[Tuple[int, int]],
    rnd: random.Random,
    tries: int,
) -> bool:
    """Place stub pair (a, b) by replacing an edge (x, y) with (a, x) and (b, y).

    Degrees are preserved.
    """
    for _ in range(tries):
        if not edge_list:
            return False
        i = rnd.randrange(len(edge_list))
        x, y = edge_list[i]
        if rnd.random() < 0.5:
            x, y = y, x
        if a == x or b == y:
            continue
        first, second = _key(a, x), _key(b, y)
        if first == second or first in edges or second in edges:
            continue
        edges.discard(edge_list[i])
        edge_list[i] = first
        edge_list.append(second)
        edges.add(first)
        edges.add(second)
        return True
    return False


def match_stubs(degrees: np.ndarray, seed: int) -> Tuple[List[Tuple[int, int]], int]:
    """Pair stubs into a simple graph.

    Returns:
        (edges, number of dropped stubs); stubs are dropped only once the
        attempt budget of 100 * |E| pairings is spent
    """
    rnd = random.Random(seed)
    stubs = [node for node, k in enumerate(degrees.tolist()) for _ in range(k)]
    budget = 100 * max(1, len(stubs) // 2)
    attempts = 0
    edges: Set[Tuple[int, int]] = set()
    edge_list: List[Tuple[int, int]] = []

    while stubs and attempts < budget:
        potential_edges: Dict[int, int] = defaultdict(int)
        rnd.shuffle(stubs)
        stubiter = iter(stubs)
        for s1, s2 in zip(stubiter, stubiter):
            attempts += 1
            key = _key(s1, s2)
            if s1 != s2 and key not in edges:
                edges.add(key)
                edge_list.append(key)
            else:
                potential_edges[s1] += 1
                potential_edges[s2] += 1
        leftover = [node for node, count in potential_edges.items() for _ in range(count)]

        if leftover and not _suitable(edges, potential_edges):
            rnd.shuffle(leftover)
            unplaced = []
            it = iter(leftover)
            for a, b in zip(it, it):
                attempts += 1
                if not _repair(a, b, edges, edge_list, rnd, tries=100):
                    unplaced.extend([a, b])
            if len(unplaced) == len(leftover):
                stubs = unplaced
                break
            leftover = unplaced
        stubs = leftover

    if stubs:
        logger.warning("Stub matching dropped %d stubs after %d attempts", len(stubs), attempts)
    return sorted(edge_list), len(stubs)


def generate_graph(config: SynthConfig) -> FriendshipNetwork:
    """Simple graph realising a sampled degree sequence, unit edge weights.

    Nodes left without edges are removed; dropped stubs and removed nodes are
    recorded in the network notes.
    """
    rng = np.random.default_rng(config.seed)
    degrees = sample_degrees(config, rng)
    edges, dropped = match_stubs(degrees, config.seed)

    graph = nx.Graph()
    graph.add_nodes_from(node_id(i) for i in range(config.n_nodes))
    graph.add_edges_from((node_id(a), node_id(b), {"weight": 1}) for a, b in edges)
    isolated = sorted(nx.isolates(graph))
    graph.remove_nodes_from(isolated)

    network = FriendshipNetwork(kind=NetworkKind.INTERACTION, graph=graph, window=config.window())
    if dropped:
        network.notes.append(f"dropped {dropped} stubs")
    if isolated:
        network.notes.append(f"removed {len(isolated)} isolated nodes")
    logger.info(
        "Generated %s graph: %d nodes, %d edges",
        config.degree_dist.kind.value, graph.number_of_nodes(), graph.number_of_edges(),
    )
    return network
