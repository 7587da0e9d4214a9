"""Reciprocal friendship networks and their node features."""

from .features import (
    FEATURE_NAMES,
    NodeFeatures,
    eigenvector_centrality,
    features_frame,
    largest_component,
    node_features,
    power_iteration,
)
from .network import (
    FriendshipNetwork,
    NetworkKind,
    build_all_networks,
    build_friendship_network,
    directed_counts,
    network_summary,
    read_network,
    sidecar_path,
    write_network,
)

__all__ = [
    'FEATURE_NAMES',
    'FriendshipNetwork',
    'NetworkKind',
    'NodeFeatures',
    'build_all_networks',
    'build_friendship_network',
    'directed_counts',
    'eigenvector_centrality',
    'features_frame',
    'largest_component',
    'network_summary',
    'node_features',
    'power_iteration',
    'read_network',
    'sidecar_path',
    'write_network',
]
