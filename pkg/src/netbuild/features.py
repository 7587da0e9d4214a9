"""Per-node structural features of a friendship network."""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, List, Tuple

import networkx as nx
import numpy as np
import pandas as pd

from src.errors import DataError, InvariantError
from .network import FriendshipNetwork

logger = logging.getLogger(__name__)

POWER_TOL = 1e-8
POWER_MAX_ITER = 1000
RESIDUAL_TOL = 1e-6

FEATURE_NAMES = ["degree", "degree_centrality", "eigenvector_centrality", "clustering_coefficient"]


@dataclass(frozen=True)
class NodeFeatures:
    user: str
    degree: int
    degree_centrality: float
    eigenvector_centrality: float
    clustering_coefficient: float


def largest_component(graph: nx.Graph) -> List[str]:
    """Nodes of the largest connected component; ties go to the smallest node id."""
    components = [sorted(c) for c in nx.connected_components(graph)]
    components.sort(key=lambda c: (-len(c), c[0]))
    return components[0]


def power_iteration(
    nodes: List[str],
    graph: nx.Graph,
    tol: float = POWER_TOL,
    max_iter: int = POWER_MAX_ITER,
) -> Tuple[np.ndarray, float]:
    """Leading eigenvector of the unweighted adjacency restricted to `nodes`.

    networkx iterates on A + I and stops once the L1 change over all nodes
    drops below n * tol, so `tol` is divided by n to bound the change of the
    whole vector.

    Returns:
        (L2-normalised non-negative vector aligned with `nodes`, eigenvalue of A)

    Raises:
        InvariantError: no convergence within `max_iter`, or the residual
            ||Ax - lambda x|| exceeds 1e-6
    """
    n = len(nodes)
    sub = graph.subgraph(nodes)
    try:
        centrality = nx.eigenvector_centrality(sub, max_iter=max_iter, tol=tol / n, weight=None)
    except nx.PowerIterationFailedConvergence as e:
        raise InvariantError(
            "eigenvector centrality did not converge",
            {"iterations": max_iter, "n_nodes": n, "error": str(e)},
        ) from e
    x = np.asarray([centrality[node] for node in nodes], dtype=np.float64)

    position = {node: i for i, node in enumerate(nodes)}
    pairs = [(position[u], position[v]) for u, v in sub.edges()]
    if pairs:
        edges = np.asarray(pairs, dtype=np.int64)
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
    ax = np.bincount(rows, weights=x[cols], minlength=n)
    eigenvalue = float(x @ ax)
    residual = float(np.linalg.norm(ax - eigenvalue * x))
    logger.debug("Eigenvector centrality on %d nodes: lambda=%.6g residual=%.3g", n, eigenvalue, residual)
    if residual >= RESIDUAL_TOL:
        raise InvariantError(
            "eigenvector centrality residual too large",
            {"residual": residual, "iterations": max_iter, "n_nodes": n},
        )
    return np.clip(x, 0.0, None), eigenvalue


def eigenvector_centrality(network: FriendshipNetwork) -> Dict[str, float]:
    """Centrality on the largest component; every other node gets 0."""
    graph = network.graph
    giant = largest_component(graph)
    vector, _ = power_iteration(giant, graph)
    centrality = {node: 0.0 for node in graph.nodes}
    centrality.update(zip(giant, vector.tolist()))
    n_outside = graph.number_of_nodes() - len(giant)
    if n_outside:
        note = f"eigenvector centrality set to 0 for {n_outside} nodes outside the largest component"
        network.notes.append(note)
        logger.info(note)
    return centrality


def node_features(network: FriendshipNetwork) -> Dict[str, NodeFeatures]:
    """Degree, degree centrality, eigenvector centrality and clustering per node.

    Raises:
        DataError: the network has no nodes
    """
    graph = network.graph
    n = graph.number_of_nodes()
    if n == 0:
        raise DataError(f"{network.kind.value} network has no nodes")

    eigen = eigenvector_centrality(network)
    clustering = nx.clustering(graph)
    scale = 1.0 / (n - 1) if n > 1 else 0.0
    return {
        node: NodeFeatures(
            user=node,
            degree=graph.degree(node),
            degree_centrality=graph.degree(node) * scale,
            eigenvector_centrality=eigen[node],
            clustering_coefficient=float(clustering[node]),
        )
        for node in sorted(graph.nodes)
    }


def features_frame(features: Dict[str, NodeFeatures]) -> pd.DataFrame:
    """Node features as a DataFrame sorted by user."""
    rows = [asdict(features[user]) for user in sorted(features)]
    return pd.DataFrame(rows, columns=["user"] + FEATURE_NAMES)
