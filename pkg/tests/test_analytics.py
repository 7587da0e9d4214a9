"""Unit tests for homophily and friendship paradox statistics."""

import io
import math
import networkx as nx
import numpy as np
import pandas as pd
import pytest
import sys
import os

# Add project root to path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.analytics import (
    default_degree_bins,
    default_s_bins,
    gfp_report,
    homophily_correlation,
    individual_gfp,
    network_gfp,
    paradox_grid,
    weighted_friend_average,
)
from src.errors import DataError, InsufficientDataError, UsageError
from src.netbuild import FriendshipNetwork, NetworkKind


def network_from_edges(edges):
    graph = nx.Graph()
    for edge in edges:
        u, v = edge[0], edge[1]
        graph.add_edge(u, v, weight=edge[2] if len(edge) > 2 else 1)
    return FriendshipNetwork(kind=NetworkKind.INTERACTION, graph=graph)


@pytest.fixture
def star():
    """Center with score 0.9 and four leaves with 0.1."""
    network = network_from_edges([("c", f"l{i}") for i in range(4)])
    scores = {"c": 0.9, **{f"l{i}": 0.1 for i in range(4)}}
    return network, scores


class TestWeightedFriendAverage:
    """Tests for weighted_friend_average."""

    def test_unweighted(self):
        """Equal weights give the plain mean."""
        network = network_from_edges([("u", "a"), ("u", "b")])
        averages = weighted_friend_average(network, {"a": 0.2, "b": 0.8}, "iar")
        assert averages["u"] == pytest.approx(0.5)

    def test_weighted(self):
        """Weights 3 and 1 give (3*0.2 + 0.8) / 4."""
        network = network_from_edges([("u", "a", 3), ("u", "b", 1)])
        averages = weighted_friend_average(network, {"a": 0.2, "b": 0.8}, "iar")
        assert averages["u"] == pytest.approx(0.35)

    def test_unscored_friends_skipped(self):
        """Friends without a score do not count; users without scored friends are omitted."""
        network = network_from_edges([("u", "a"), ("u", "b"), ("x", "b")])
        averages = weighted_friend_average(network, {"a": 0.7}, "iar")
        assert averages["u"] == pytest.approx(0.7)
        assert "x" not in averages

    def test_score_table_input(self):
        """A ScoreTable works like a plain mapping."""
        table = pd.DataFrame({"user": ["a", "b", "u"], "iar": [0.2, np.nan, 0.4], "sar": [0.1, 0.2, 0.3]})
        network = network_from_edges([("u", "a"), ("u", "b")])
        assert weighted_friend_average(network, table, "iar")["u"] == pytest.approx(0.2)
        assert weighted_friend_average(network, table, "sar")["u"] == pytest.approx(0.15)


class TestHomophily:
    """Tests for homophily_correlation."""

    def test_perfect_homophily(self):
        """Two disconnected communities with distinct scores correlate perfectly."""
        edges = [("a1", "a2"), ("a2", "a3"), ("a1", "a3"), ("b1", "b2"), ("b2", "b3"), ("b1", "b3")]
        scores = {"a1": 0.9, "a2": 0.9, "a3": 0.9, "b1": 0.1, "b2": 0.1, "b3": 0.1}
        result = homophily_correlation(network_from_edges(edges), scores, "iar")
        assert result.coefficient == pytest.approx(1.0)
        assert result.n == 6

    def test_perfect_heterophily(self):
        """A complete bipartite graph between opposite scores correlates at -1."""
        edges = [(f"a{i}", f"b{j}") for i in range(3) for j in range(3)]
        scores = {**{f"a{i}": 0.9 for i in range(3)}, **{f"b{j}": 0.1 for j in range(3)}}
        result = homophily_correlation(network_from_edges(edges), scores, "iar")
        assert result.coefficient == pytest.approx(-1.0)

    def test_too_few_users(self):
        """Fewer than three qualifying users is an error."""
        with pytest.raises(InsufficientDataError):
            homophily_correlation(network_from_edges([("a", "b")]), {"a": 0.1, "b": 0.2}, "iar")


class TestIndividualGfp:
    """Tests for individual_gfp."""

    def test_star(self, star):
        """Leaves see the paradox, the center does not."""
        network, scores = star
        flags, p = individual_gfp(network, scores, "iar")
        assert flags["c"] is False
        assert all(flags[f"l{i}"] for i in range(4))
        assert p == pytest.approx(0.8)

    def test_equal_scores(self):
        """Strict inequality: equal scores never hold."""
        network = network_from_edges([("a", "b"), ("b", "c")])
        _, p = individual_gfp(network, {"a": 0.3, "b": 0.3, "c": 0.3}, "iar")
        assert p == 0.0

    def test_pair(self):
        """One of two nodes is below its friend."""
        _, p = individual_gfp(network_from_edges([("a", "b")]), {"a": 0.1, "b": 0.9}, "iar")
        assert p == pytest.approx(0.5)

    def test_unweighted_friend_mean(self):
        """Edge weights do not enter the individual comparison."""
        network = network_from_edges([("u", "a", 100), ("u", "b", 1)])
        flags, _ = individual_gfp(network, {"u": 0.5, "a": 0.2, "b": 0.9}, "iar")
        assert flags["u"] is True

    def test_nothing_evaluated(self):
        """Without scored pairs P is NaN."""
        _, p = individual_gfp(network_from_edges([("a", "b")]), {"a": 0.1}, "iar")
        assert math.isnan(p)


class TestNetworkGfp:
    """Tests for network_gfp."""

    def test_star(self, star):
        """<s> = 0.26 and <s>_nn = 0.5 on the star."""
        mean_s, mean_s_nn, holds = network_gfp(*star, "iar")
        assert mean_s == pytest.approx(0.26)
        assert mean_s_nn == pytest.approx(0.5)
        assert holds is True

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_regular_graph_never_holds(self, seed):
        """Constant degree makes both means equal."""
        graph = nx.random_regular_graph(4, 30, seed=seed)
        network = network_from_edges([(f"n{u}", f"n{v}") for u, v in graph.edges()])
        rng = np.random.default_rng(seed)
        scores = {node: float(rng.random()) for node in network.graph.nodes}
        mean_s, mean_s_nn, holds = network_gfp(network, scores, "iar")
        assert mean_s_nn == pytest.approx(mean_s, rel=1e-12)
        assert holds is False

    def test_unscored_nodes_excluded(self):
        """Degrees count scored friends only."""
        network = network_from_edges([("a", "b"), ("a", "x")])
        mean_s, mean_s_nn, _ = network_gfp(network, {"a": 0.2, "b": 0.6}, "iar")
        assert mean_s == pytest.approx(0.4)
        assert mean_s_nn == pytest.approx(0.4)

    def test_scored_node_without_scored_friend(self):
        """A scored node whose friends are all unscored still enters <s>."""
        network = network_from_edges([("a", "b"), ("c", "x")])
        mean_s, mean_s_nn, holds = network_gfp(network, {"a": 0.2, "b": 0.4, "c": 0.9}, "iar")
        assert mean_s == pytest.approx(0.5)
        assert mean_s_nn == pytest.approx(0.3)
        assert holds is False

    def test_no_scored_edge(self):
        """Scored nodes without a scored edge leave <s>_nn undefined."""
        with pytest.raises(DataError):
            network_gfp(network_from_edges([("a", "x"), ("b", "y")]), {"a": 0.2, "b": 0.4}, "iar")

    @pytest.mark.parametrize("seed", range(20))
    def test_covariance_identity_on_random_graphs(self, seed):
        """<s>_nn - <s> = cov(k, s) / <k>, so the paradox holds exactly when cov(k, s) > 0."""
        rng = np.random.default_rng(seed)
        graph = nx.gnm_random_graph(60, 150, seed=seed)
        network = network_from_edges([(f"n{u:02d}", f"n{v:02d}") for u, v in graph.edges()])
        nodes = sorted(network.graph.nodes)
        scored = [node for node in nodes if rng.random() < 0.9]
        scores = {node: float(rng.random()) for node in scored}

        mean_s, mean_s_nn, holds = network_gfp(network, scores, "iar")
        k = np.asarray([sum(1 for v in network.graph[u] if v in scores) for u in scored], dtype=float)
        s = np.asarray([scores[u] for u in scored])
        cov_ks = float(np.mean((k - k.mean()) * (s - s.mean())))
        assert abs((mean_s_nn - mean_s) - cov_ks / k.mean()) < 1e-12 * max(1.0, abs(mean_s_nn))
        assert holds == (cov_ks > 0)

    def test_empty(self):
        """No evaluable node is a data error."""
        with pytest.raises(DataError):
            network_gfp(network_from_edges([]), {}, "iar")


class TestParadoxGrid:
    """Tests for paradox_grid and bin helpers."""

    def test_default_degree_bins(self):
        """Powers of two past the maximum degree."""
        assert default_degree_bins(4) == [1, 2, 4, 8]
        assert default_degree_bins(1) == [1, 2]
        assert default_degree_bins(0) == [1, 2]

    def test_default_s_bins(self):
        """Width 0.05 gives 20 bins ending exactly at 1."""
        edges = default_s_bins(0.05)
        assert len(edges) == 21
        assert edges[0] == 0.0 and edges[-1] == 1.0
        assert default_s_bins(0.3) == [0.0, 0.3, 0.6, 0.9, 1.0]

    def test_invalid_width(self):
        """Width must be in (0, 1]."""
        with pytest.raises(UsageError):
            default_s_bins(0.0)

    def test_single_cell_equals_p(self, star):
        """One cell covering everything holds the overall P."""
        grid = paradox_grid(*star, "iar", degree_bins=[1, 100], s_bins=[0.0, 1.0])
        _, p = individual_gfp(*star, "iar")
        assert grid.counts.tolist() == [[5]]
        assert grid.holding_fraction[0, 0] == pytest.approx(p)

    def test_star_cells(self, star):
        """Leaves and center land in different degree bins."""
        grid = paradox_grid(*star, "iar", degree_bins=[1, 2, 5], s_bins=[0.0, 0.5, 1.0])
        assert grid.counts.tolist() == [[4, 0], [0, 1]]
        fractions = grid.holding_fraction
        assert fractions[0, 0] == 1.0
        assert fractions[1, 1] == 0.0
        assert math.isnan(fractions[0, 1])
        assert grid.n_nodes == 5

    def test_score_one_in_last_bin(self):
        """The last score bin is closed on the right."""
        network = network_from_edges([("a", "b")])
        grid = paradox_grid(network, {"a": 1.0, "b": 0.0}, "iar", degree_bins=[1, 2], s_bins=[0.0, 0.5, 1.0])
        assert grid.counts.tolist() == [[1, 1]]

    def test_node_outside_bins(self, star):
        """Coverage gaps are data errors."""
        with pytest.raises(DataError):
            paradox_grid(*star, "iar", degree_bins=[1, 2], s_bins=[0.0, 1.0])

    def test_invalid_bins(self, star):
        """Bins must be ascending."""
        with pytest.raises(UsageError):
            paradox_grid(*star, "iar", degree_bins=[2, 1], s_bins=[0.0, 1.0])

    def test_empty_network(self):
        """An empty network gives an all-zero grid."""
        grid = paradox_grid(network_from_edges([]), {}, "iar")
        assert grid.n_nodes == 0

    def test_csv_leaves_empty_cells_blank(self, star):
        """Empty cells have an empty holding_fraction field."""
        grid = paradox_grid(*star, "iar", degree_bins=[1, 2, 5], s_bins=[0.0, 0.5, 1.0])
        buffer = io.StringIO()
        grid.write_csv(buffer)
        lines = buffer.getvalue().splitlines()
        assert lines[0] == "k_bin_low,k_bin_high,s_bin_low,s_bin_high,count,holding_fraction"
        assert lines[2].endswith(",0,")
        assert grid.to_dict()["holding_fraction"][0][1] is None


class TestGfpReport:
    """Tests for gfp_report."""

    def test_star_report(self, star):
        """The report collects every statistic for the star."""
        report = gfp_report(*star, "iar")
        assert report.kind == "interaction"
        assert report.P == pytest.approx(0.8)
        assert report.network_gfp_holds is True
        assert report.n_nodes_used == 5
        assert report.grid.n_nodes == 5
        assert report.rho_ks.coefficient == pytest.approx(1.0)
        # every friend average is either 0.1 or 0.9, opposite to the own score
        assert report.homophily.coefficient == pytest.approx(-1.0)

    def test_undefined_correlations_become_notes(self):
        """Too few nodes leave rho_ks and homophily null with notes."""
        report = gfp_report(network_from_edges([("a", "b")]), {"a": 0.1, "b": 0.9}, "iar")
        assert report.rho_ks is None
        assert report.homophily is None
        assert len(report.notes) == 2
        data = report.to_dict()
        assert data["rho_ks"] is None
        assert data["P"] == pytest.approx(0.5)

    def test_baselines_merge_into_dict(self, star):
        """Null-model blocks appear at the top level of the report."""
        report = gfp_report(*star, "iar")
        report.baselines["baseline1"] = {"model": "edge_swap"}
        assert report.to_dict()["baseline1"] == {"model": "edge_swap"}
