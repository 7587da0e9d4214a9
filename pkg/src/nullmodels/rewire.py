"""Network randomizations used as null models.

Both keep the node set and the scores attached to nodes; only topology moves.
"""

import logging
import random
from typing import Dict, List, Protocol, Tuple

import networkx as nx

from src.errors import DataError
from src.netbuild import FriendshipNetwork

logger = logging.getLogger(__name__)


class NullModel(Protocol):
    """A seeded randomization of a friendship network."""

    name: str

    def randomize(self, network: FriendshipNetwork, seed: int) -> FriendshipNetwork:
        """Return a randomized copy; the input is never modified."""
        ...


def _edge_key(a: str, b: str) -> Tuple[str, str]:
    return (a, b) if a < b else (b, a)


def _rebuild(network: FriendshipNetwork, weights: Dict[Tuple[str, str], int]) -> FriendshipNetwork:
    graph = nx.Graph()
    graph.add_nodes_from(sorted(network.graph.nodes))
    for (a, b), w in sorted(weights.items()):
        graph.add_edge(a, b, weight=w)
    return network.with_graph(graph)


def degree_preserving_rewire(network: FriendshipNetwork, swap_multiplier: int = 10, seed: int = 0) -> FriendshipNetwork:
    """Randomize by double edge swaps: (u,v),(x,y) -> (u,y),(x,v).

    swap_multiplier * |E| swaps are attempted; a swap creating a self-loop or
    a duplicate edge is rejected. Each moved edge keeps its weight.

    Raises:
        DataError: the network has no edges
    """
    m = network.n_edges
    if m == 0:
        raise DataError("edge swap needs at least one edge")
    edges: List[Tuple[str, str, int]] = network.sorted_edges()
    if m == 1:
        return _rebuild(network, {(u, v): w for u, v, w in edges})

    rng = random.Random(seed)
    present = {(u, v) for u, v, _ in edges}
    attempts = swap_multiplier * m
    accepted = 0
    for _ in range(attempts):
        i, j = rng.sample(range(m), 2)
        u, v, w1 = edges[i]
        x, y, w2 = edges[j]
        if rng.random() < 0.5:
            x, y = y, x
        if u == y or x == v:
            continue
        first, second = _edge_key(u, y), _edge_key(x, v)
        if first in present or second in present:
            continue
        present.discard(_edge_key(u, v))
        present.discard(_edge_key(x, y))
        present.add(first)
        present.add(second)
        edges[i] = (*first, w1)
        edges[j] = (*second, w2)
        accepted += 1

    logger.debug("Edge swap: %d of %d attempts accepted (seed=%d)", accepted, attempts, seed)
    return _rebuild(network, {(u, v): w for u, v, w in edges})


def random_neighbor_reassign(network: FriendshipNetwork, seed: int = 0) -> FriendshipNetwork:
    """Keep the smaller endpoint of every edge and draw a new uniform partner.

    Edges that land on the same pair merge and their weights add up. The
    degree sequence is not preserved; isolated nodes may appear.

    Raises:
        DataError: fewer than two nodes
    """
    nodes = sorted(network.graph.nodes)
    n = len(nodes)
    if n < 2:
        raise DataError("neighbor reassignment needs at least two nodes")
    position = {node: i for i, node in enumerate(nodes)}
    rng = random.Random(seed)

    weights: Dict[Tuple[str, str], int] = {}
    for u, _, w in network.sorted_edges():
        idx = rng.randrange(n - 1)
        if idx >= position[u]:
            idx += 1
        key = _edge_key(u, nodes[idx])
        weights[key] = weights.get(key, 0) + w

    merged = network.n_edges - len(weights)
    if merged:
        logger.debug("Neighbor reassignment merged %d duplicate edges (seed=%d)", merged, seed)
    return _rebuild(network, weights)


class EdgeSwapModel:
    """Degree-preserving null (baseline1)."""

    name = "edge_swap"

    def __init__(self, swap_multiplier: int = 10):
        self.swap_multiplier = swap_multiplier

    def randomize(self, network: FriendshipNetwork, seed: int) -> FriendshipNetwork:
        return degree_preserving_rewire(network, self.swap_multiplier, seed)


class NeighborReassignModel:
    """Edge-count-preserving null (baseline2)."""

    name = "neighbor_reassign"

    def randomize(self, network: FriendshipNetwork, seed: int) -> FriendshipNetwork:
        return random_neighbor_reassign(network, seed)
