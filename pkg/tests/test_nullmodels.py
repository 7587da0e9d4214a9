"""Unit tests for network randomizations and null distributions."""

import networkx as nx
import numpy as np
import pytest
import sys
import os

# Add project root to path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.analytics import homophily_correlation
from src.errors import DataError, InsufficientDataError, UsageError
from src.netbuild import FriendshipNetwork, NetworkKind
from src.nullmodels import (
    BASELINE_KEYS,
    EdgeSwapModel,
    NeighborReassignModel,
    NullConfig,
    NullModelFactory,
    NullModelKind,
    degree_preserving_rewire,
    empirical_p_value,
    null_distribution,
    random_neighbor_reassign,
)

def network_from_graph(graph, weight=1):
    labelled = nx.Graph()
    labelled.add_nodes_from(f"n{u:03d}" for u in graph.nodes)
    for u, v in graph.edges():
        labelled.add_edge(f"n{u:03d}", f"n{v:03d}", weight=weight)
    return FriendshipNetwork(kind=NetworkKind.INTERACTION, graph=labelled)

@pytest.fixture
def er_network():
    """A sparse random graph with varied degrees."""
    return network_from_graph(nx.gnm_random_graph(60, 150, seed=4))

def homophilous_scores(network):
    """Scores equal to each node's community, so the observed graph is homophilous."""
    return {node: (0.9 if int(node[1:]) < 30 else 0.1) for node in network.graph.nodes}

class TestDegreePreservingRewire:
    """Tests for degree_preserving_rewire."""

    def test_degrees_preserved(self, er_network):
        """Every node keeps its degree."""
        rewired = degree_preserving_rewire(er_network, swap_multiplier=10, seed=1)
        assert dict(rewired.graph.degree()) == dict(er_network.graph.degree())
        assert rewired.n_edges == er_network.n_edges

    def test_simple_graph(self, er_network):
        """No self-loops appear."""
        rewired = degree_preserving_rewire(er_network, seed=2)
        assert nx.number_of_selfloops(rewired.graph) == 0

    def test_topology_changes(self, er_network):
        """Swaps actually move edges."""
        rewired = degree_preserving_rewire(er_network, seed=3)
        assert set(rewired.sorted_edges()) != set(er_network.sorted_edges())

    def test_deterministic_per_seed(self, er_network):
        """The same seed gives the same graph; different seeds differ."""
        a = degree_preserving_rewire(er_network, seed=5).sorted_edges()
        b = degree_preserving_rewire(er_network, seed=5).sorted_edges()
        c = degree_preserving_rewire(er_network, seed=6).sorted_edges()
        assert a == b
        assert a != c

    def test_input_untouched(self, er_network):
        """The original network is not modified."""
        before = er_network.sorted_edges()
        degree_preserving_rewire(er_network, seed=7)
        assert er_network.sorted_edges() == before

    def test_weights_travel_with_edges(self):
        """The multiset of weights is unchanged."""
        graph = nx.gnm_random_graph(30, 60, seed=8)
        network = network_from_graph(graph)
        for i, (u, v) in enumerate(network.graph.edges()):
            network.graph[u][v]["weight"] = i + 1
        rewired = degree_preserving_rewire(network, seed=9)
        assert sorted(w for _, _, w in rewired.sorted_edges()) == list(range(1, 61))

    def test_no_edges(self):
        """An edgeless network cannot be swapped."""
        with pytest.raises(DataError):
            degree_preserving_rewire(network_from_graph(nx.empty_graph(3)))

class TestRandomNeighborReassign:
    """Tests for random_neighbor_reassign."""

    def test_total_weight_preserved(self, er_network):
        """Merged edges add their weights."""
        rewired = random_neighbor_reassign(er_network, seed=1)
        total = sum(w for _, _, w in rewired.sorted_edges())
        assert total == er_network.n_edges
        assert rewired.n_edges <= er_network.n_edges
        assert nx.number_of_selfloops(rewired.graph) == 0

    def test_node_set_kept(self, er_network):
        """Nodes stay even when they lose every edge."""
        rewired = random_neighbor_reassign(er_network, seed=2)
        assert set(rewired.graph.nodes) == set(er_network.graph.nodes)

    def test_deterministic_per_seed(self, er_network):
        """Same seed, same result."""
        assert random_neighbor_reassign(er_network, seed=4).sorted_edges() == \
            random_neighbor_reassign(er_network, seed=4).sorted_edges()

    def test_too_small(self):
        """Fewer than two nodes is an error."""
        with pytest.raises(DataError):
            random_neighbor_reassign(network_from_graph(nx.empty_graph(1)))

class TestNullConfig:
    """Tests for NullConfig and the model factory."""

    def test_factory(self):
        """Each kind yields its model."""
        assert isinstance(NullModelFactory.create(NullConfig(model="edge_swap")), EdgeSwapModel)
        assert isinstance(NullModelFactory.create(NullConfig(model="neighbor_reassign")), NeighborReassignModel)
        assert NullModelFactory.list_models() == ["edge_swap", "neighbor_reassign"]

    def test_baseline_keys(self):
        """Edge swap is baseline1, reassignment baseline2."""
        assert BASELINE_KEYS[NullModelKind.EDGE_SWAP] == "baseline1"
        assert BASELINE_KEYS[NullModelKind.NEIGHBOR_REASSIGN] == "baseline2"

    @pytest.mark.parametrize("kwargs", [{"n_reps": 0}, {"swap_multiplier": 0}])
    def test_invalid(self, kwargs):
        """Counts must be positive."""
        with pytest.raises(UsageError):
            NullConfig(**kwargs)

class TestEmpiricalPValue:
    """Tests for empirical_p_value."""

    def test_extreme_observation(self):
        """Nothing as extreme gives the minimum 1/(n+1)."""
        null = np.array([0.0, 0.1, -0.1, 0.05])
        assert empirical_p_value(5.0, null) == pytest.approx(1 / 5)

    def test_central_observation(self):
        """An observation at the null mean has p = 1."""
        null = np.array([-1.0, 1.0, -2.0, 2.0])
        assert empirical_p_value(0.0, null) == pytest.approx(1.0)

class TestNullDistribution:
    """Tests for null_distribution."""

    def two_communities(self):
        """Two dense random blocks joined by a few edges."""
        graph = nx.planted_partition_graph(2, 30, 0.3, 0.01, seed=1)
        return network_from_graph(graph)

    def test_homophily_far_from_null(self):
        """Planted community scores beat the degree-preserving null."""
        network = self.two_communities()
        scores = homophilous_scores(network)
        summary = null_distribution(network, scores, "homophily", NullConfig(n_reps=30, seed=0))
        assert summary.observed > 0.8
        assert abs(summary.null_mean) < 0.3
        assert summary.p_value == pytest.approx(1 / 31)
        assert summary.n_reps == 30
        assert summary.model == "edge_swap"

    def test_reproducible_across_jobs(self):
        """Replicate seeds make the result independent of the worker count."""
        network = self.two_communities()
        scores = homophilous_scores(network)
        config = NullConfig(model="neighbor_reassign", n_reps=8, seed=3)
        serial = null_distribution(network, scores, "P", config, n_jobs=1)
        parallel = null_distribution(network, scores, "P", config, n_jobs=2)
        assert serial == parallel

    def test_mean_s_nn(self):
        """The degree-preserving null keeps <s>_nn exactly."""
        network = network_from_graph(nx.gnm_random_graph(40, 90, seed=2))
        rng = np.random.default_rng(0)
        scores = {node: float(rng.random()) for node in network.graph.nodes}
        summary = null_distribution(network, scores, "mean_s_nn", NullConfig(n_reps=5))
        assert summary.null_mean == pytest.approx(summary.observed)
        assert summary.null_sd == pytest.approx(0.0, abs=1e-12)

    def separated_blocks(self, size, edges):
        """Two disjoint random blocks scored 0.9 and 0.1."""
        graph = nx.disjoint_union(nx.gnm_random_graph(size, edges, seed=7), nx.gnm_random_graph(size, edges, seed=8))
        network = network_from_graph(graph)
        scores = {node: (0.9 if int(node[1:]) < size else 0.1) for node in network.graph.nodes}
        return network, scores

    @pytest.mark.parametrize("model", ["edge_swap", "neighbor_reassign"])
    def test_separated_blocks_are_significant(self, model):
        """Perfectly sorted scores lie outside every replicate."""
        network, scores = self.separated_blocks(200, 800)
        summary = null_distribution(network, scores, "homophily", NullConfig(model=model, n_reps=100, seed=0))
        assert summary.observed > 0.95
        assert summary.p_value == pytest.approx(1 / 101)

    def test_rewired_blocks_lose_homophily(self):
        """After degree-preserving rewiring the block scores no longer correlate."""
        network, scores = self.separated_blocks(2000, 4000)
        small = 0
        for seed in range(20):
            rewired = degree_preserving_rewire(network, swap_multiplier=10, seed=seed)
            if abs(homophily_correlation(rewired, scores, "iar").coefficient) < 0.05:
                small += 1
        assert small >= 19

    def test_undefined_statistic(self):
        """A statistic undefined on the observed network is an error."""
        network = network_from_graph(nx.path_graph(4))
        with pytest.raises(InsufficientDataError):
            null_distribution(network, {"n000": 0.1, "n001": 0.2}, "homophily", NullConfig(n_reps=3))

    def test_unknown_statistic(self):
        """Only the registered statistics are accepted."""
        with pytest.raises(UsageError):
            null_distribution(self.two_communities(), {}, "modularity", NullConfig())
