"""Unit tests for friendship networks and node features."""

import json
import math
import networkx as nx
import numpy as np
import pytest
import sys
import os

# Add project root to path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.errors import DataError, InvariantError, ParseError, UsageError
from src.ingest import CorpusWindow, EventKind, InteractionEvent
from src.netbuild import (
    FriendshipNetwork,
    NetworkKind,
    build_all_networks,
    build_friendship_network,
    eigenvector_centrality,
    features_frame,
    largest_component,
    network_summary,
    node_features,
    power_iteration,
    read_network,
    write_network,
)


def ev(event_id, kind, author, target, ts=0):
    return InteractionEvent(event_id, EventKind(kind), author, target, ts, ("http://x.org",))


def network_from_edges(edges, kind=NetworkKind.INTERACTION):
    graph = nx.Graph()
    for u, v in edges:
        graph.add_edge(u, v, weight=1)
    return FriendshipNetwork(kind=kind, graph=graph)


class TestBuildFriendshipNetwork:
    """Tests for build_friendship_network."""

    def test_one_way_is_not_friendship(self):
        """A retweet that is never returned creates no edge."""
        network = build_friendship_network([ev("1", "retweet", "u", "v")], {"u", "v"}, "interaction")
        assert network.n_edges == 0
        assert network.n_isolated_targets == 2

    def test_weight_sums_both_directions(self):
        """Two retweets one way and one back give weight 3."""
        events = [ev("1", "retweet", "u", "v"), ev("2", "retweet", "u", "v", 1), ev("3", "retweet", "v", "u", 2)]
        network = build_friendship_network(events, {"u", "v"}, NetworkKind.RETWEET)
        assert network.weight("u", "v") == 3

    def test_kind_filters_event_types(self):
        """Reply plus quote is a mention tie, not a retweet tie."""
        events = [ev("1", "reply", "u", "v"), ev("2", "quote", "v", "u", 1)]
        assert build_friendship_network(events, {"u", "v"}, "retweet").n_edges == 0
        mention = build_friendship_network(events, {"u", "v"}, "mention")
        assert mention.weight("u", "v") == 2

    def test_non_targets_excluded(self):
        """Both endpoints must be target users."""
        events = [ev("1", "retweet", "u", "x"), ev("2", "retweet", "x", "u", 1)]
        assert build_friendship_network(events, {"u"}, "interaction").n_edges == 0

    def test_unknown_kind(self):
        """Only the three network kinds exist."""
        with pytest.raises(UsageError):
            build_friendship_network([], set(), "follow")

    def test_interaction_dominates_other_kinds(self):
        """Interaction weights are at least the retweet and mention weights."""
        events = [
            ev("1", "retweet", "a", "b"), ev("2", "retweet", "b", "a", 1),
            ev("3", "reply", "a", "b", 2), ev("4", "quote", "b", "a", 3),
            ev("5", "reply", "a", "c", 4), ev("6", "retweet", "c", "a", 5),
        ]
        networks = build_all_networks(events, {"a", "b", "c"})
        interaction = networks[NetworkKind.INTERACTION]
        assert interaction.weight("a", "b") == 4
        assert interaction.weight("a", "c") == 2
        assert networks[NetworkKind.RETWEET].weight("a", "b") == 2
        assert networks[NetworkKind.MENTION].weight("a", "b") == 2
        assert not networks[NetworkKind.RETWEET].graph.has_edge("a", "c")

        summary = network_summary(networks.values())
        assert list(summary["kind"]) == ["interaction", "retweet", "mention"]


class TestNetworkIO:
    """Tests for the edge-list format."""

    def test_write_and_read(self, tmp_path):
        """Edges, kind and window survive the edge list and sidecar."""
        window = CorpusWindow(start=0, buffer_end=10, end=20)
        network = network_from_edges([("b", "a"), ("b", "c")], NetworkKind.MENTION)
        network.window = window
        path = tmp_path / "network.mention.edgelist"
        write_network(network, path)
        assert path.read_text().splitlines() == ["a b 1", "b c 1"]
        sidecar = json.loads((tmp_path / "network.mention.json").read_text())
        assert sidecar["n_edges"] == 2

        again = read_network(path)
        assert again.kind is NetworkKind.MENTION
        assert again.window == window
        assert again.sorted_edges() == network.sorted_edges()

    def test_missing_sidecar_needs_kind(self, tmp_path):
        """Without a sidecar the caller must name the kind."""
        path = tmp_path / "edges.txt"
        path.write_text("a b 2\n")
        with pytest.raises(DataError):
            read_network(path)
        assert read_network(path, kind="retweet").weight("a", "b") == 2

    @pytest.mark.parametrize("line", ["a b", "a a 1", "a b x", "a b 0"])
    def test_bad_lines(self, tmp_path, line):
        """Malformed edge lines raise ParseError."""
        path = tmp_path / "edges.txt"
        path.write_text(line + "\n")
        with pytest.raises(ParseError):
            read_network(path, kind="interaction")


class TestNodeFeatures:
    """Tests for node_features."""

    def test_triangle(self):
        """Symmetric triangle: clustering 1, centrality 1/sqrt(3)."""
        features = node_features(network_from_edges([("a", "b"), ("b", "c"), ("a", "c")]))
        for f in features.values():
            assert f.degree == 2
            assert f.clustering_coefficient == pytest.approx(1.0)
            assert f.eigenvector_centrality == pytest.approx(1 / math.sqrt(3), abs=1e-6)

    def test_star(self):
        """Star with four leaves."""
        features = node_features(network_from_edges([("c", f"l{i}") for i in range(4)]))
        assert features["c"].clustering_coefficient == 0.0
        assert features["l0"].degree_centrality == pytest.approx(0.25)
        assert features["c"].degree_centrality == pytest.approx(1.0)

    def test_path(self):
        """Path a-b-c has the exact P3 eigenvector."""
        features = node_features(network_from_edges([("a", "b"), ("b", "c")]))
        assert features["b"].clustering_coefficient == 0.0
        assert features["b"].eigenvector_centrality == pytest.approx(1 / math.sqrt(2), abs=1e-6)
        assert features["a"].eigenvector_centrality == pytest.approx(0.5, abs=1e-6)
        assert features["c"].eigenvector_centrality == pytest.approx(0.5, abs=1e-6)

    def test_matches_networkx(self):
        """Centrality agrees with the networkx solver on a connected graph."""
        graph = nx.connected_watts_strogatz_graph(40, 4, 0.3, seed=1)
        network = network_from_edges([(f"n{u:02d}", f"n{v:02d}") for u, v in graph.edges()])
        ours = eigenvector_centrality(network)
        reference = nx.eigenvector_centrality(network.graph, max_iter=10000, tol=1e-12)
        for node, value in reference.items():
            assert ours[node] == pytest.approx(value, abs=1e-5)

    def test_residual_small_on_random_graph(self):
        """The emitted vector satisfies Ax = lambda x to 1e-6."""
        graph = nx.connected_watts_strogatz_graph(200, 6, 0.2, seed=4)
        network = network_from_edges([(f"n{u:03d}", f"n{v:03d}") for u, v in graph.edges()])
        centrality = eigenvector_centrality(network)
        nodes = sorted(network.graph.nodes)
        x = np.asarray([centrality[n] for n in nodes])
        A = nx.to_numpy_array(network.graph, nodelist=nodes, weight=None)
        eigenvalue = float(x @ A @ x)
        assert np.linalg.norm(A @ x - eigenvalue * x) < 1e-6
        assert (x >= 0).all()

    def test_no_convergence_is_invariant_error(self):
        """Running out of iterations raises InvariantError."""
        graph = nx.path_graph(8)
        with pytest.raises(InvariantError):
            power_iteration(sorted(graph.nodes), graph, max_iter=2)

    def test_smaller_components_get_zero(self):
        """Only the largest component carries centrality, with a note."""
        network = network_from_edges([("a", "b"), ("b", "c"), ("x", "y")])
        centrality = eigenvector_centrality(network)
        assert centrality["x"] == 0.0 and centrality["y"] == 0.0
        assert np.linalg.norm([centrality[n] for n in "abc"]) == pytest.approx(1.0)
        assert any("outside the largest component" in note for note in network.notes)

    def test_component_tie_breaks_on_node_id(self):
        """Equal-size components resolve to the one with the smallest id."""
        graph = nx.Graph([("m", "n"), ("a", "z")])
        assert largest_component(graph) == ["a", "z"]

    def test_empty_network(self):
        """No nodes, no features."""
        with pytest.raises(DataError):
            node_features(network_from_edges([]))

    def test_frame(self):
        """The feature frame has one sorted row per node."""
        frame = features_frame(node_features(network_from_edges([("b", "a"), ("b", "c")])))
        assert list(frame["user"]) == ["a", "b", "c"]
        assert list(frame.columns) == ["user", "degree", "degree_centrality",
                                       "eigenvector_centrality", "clustering_coefficient"]
