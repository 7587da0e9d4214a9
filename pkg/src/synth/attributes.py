"""Planted susceptibility scores with tunable degree correlation and homophily."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd

from src.analytics import homophily_correlation
from src.errors import DataError, SusceptError
from src.netbuild import FriendshipNetwork
from src.stats import spearman
from src.suscept import SusceptibilityScore, score_table
from .config import Marginal, MarginalKind, SynthConfig

logger = logging.getLogger(__name__)

REWIRE_MULTIPLIER = 20


@dataclass
class AttributeReport:
    """Targets against achieved values for one planted metric."""

    metric: str
    rho_ks_target: float
    rho_ks_achieved: Optional[float]
    max_abs_rho_ks: Optional[float]
    homophily_strength: float
    homophily_achieved: Optional[float]
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "rho_ks_target": self.rho_ks_target,
            "rho_ks_achieved": self.rho_ks_achieved,
            "max_abs_rho_ks": self.max_abs_rho_ks,
            "homophily_strength": self.homophily_strength,
            "homophily_achieved": self.homophily_achieved,
            "notes": list(self.notes),
        }


def draw_marginal(marginal: Marginal, size: int, rng: np.random.Generator) -> np.ndarray:
    if marginal.kind is MarginalKind.UNIFORM:
        return rng.uniform(0.0, 1.0, size=size)
    return rng.beta(marginal.a, marginal.b, size=size)


def _degree_order(degrees: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    # ascending degree, ties in random order
    return np.lexsort((rng.random(len(degrees)), degrees))


def rank_couple(values: np.ndarray, degrees: np.ndarray, rho: float, rng: np.random.Generator) -> np.ndarray:
    """Sort the values of a random |rho| share of nodes along their degree order."""
    n = len(values)
    coupled = np.sort(rng.choice(n, size=int(round(abs(rho) * n)), replace=False))
    out = values.copy()
    if len(coupled) < 2:
        return out
    order = coupled[_degree_order(degrees[coupled], rng)]
    ranked = np.sort(values[coupled])
    if rho < 0:
        ranked = ranked[::-1]
    out[order] = ranked
    return out


def blend_neighbors(
    network: FriendshipNetwork,
    users: List[str],
    values: np.ndarray,
    strength: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Visit nodes in random order, pulling each towards its already-visited neighbors."""
    if strength == 0.0:
        return values.copy()
    position = {user: i for i, user in enumerate(users)}
    out = values.copy()
    assigned = np.zeros(len(users), dtype=bool)
    graph = network.graph
    for i in rng.permutation(len(users)):
        friends = [position[v] for v in graph[users[i]]]
        done = [j for j in friends if assigned[j]]
        if done:
            out[i] = strength * out[done].mean() + (1.0 - strength) * values[i]
        assigned[i] = True
    return out


def assortative_rewire(
    network: FriendshipNetwork,
    values: Mapping[str, float],
    strength: float,
    rng: np.random.Generator,
    multiplier: int = REWIRE_MULTIPLIER,
) -> int:
    """Degree-preserving swaps (u,v),(x,y) -> (u,y),(x,v) that bring connected scores closer.

    `strength * multiplier * |E|` swaps are proposed. A proposal is kept only
    when it lowers |s_u - s_v| + |s_x - s_y|, creates no self-loop and no
    duplicate edge. Edits `network.graph` in place; every edge keeps weight 1.

    Returns:
        number of accepted swaps
    """
    edges: List[Tuple[str, str]] = [(u, v) for u, v, _ in network.sorted_edges()]
    m = len(edges)
    attempts = int(round(strength * multiplier * m))
    if m < 2 or attempts == 0:
        return 0

    present = set(edges)
    picks = rng.integers(0, m, size=(attempts, 2)).tolist()
    flips = (rng.random(attempts) < 0.5).tolist()
    accepted = 0
    for (i, j), flip in zip(picks, flips):
        if i == j:
            continue
        u, v = edges[i]
        x, y = edges[j]
        if flip:
            x, y = y, x
        if u == y or x == v:
            continue
        before = abs(values[u] - values[v]) + abs(values[x] - values[y])
        after = abs(values[u] - values[y]) + abs(values[x] - values[v])
        if after >= before:
            continue
        first = (u, y) if u < y else (y, u)
        second = (x, v) if x < v else (v, x)
        if first in present or second in present:
            continue
        present.discard(edges[i])
        present.discard(edges[j])
        present.add(first)
        present.add(second)
        edges[i], edges[j] = first, second
        accepted += 1

    graph = network.graph
    graph.remove_edges_from(list(graph.edges()))
    graph.add_edges_from((u, v, {"weight": 1}) for u, v in sorted(edges))
    logger.debug("Assortative rewiring: %d of %d swaps accepted", accepted, attempts)
    return accepted


def _plant(
    users: List[str],
    degrees: np.ndarray,
    network: FriendshipNetwork,
    rho: float,
    config: SynthConfig,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray]:
    """Planted values and the draw they were coupled from."""
    base = draw_marginal(config.metric_marginal, len(users), rng)
    coupled = rank_couple(base, degrees, rho, rng)
    values = np.clip(blend_neighbors(network, users, coupled, config.homophily_strength, rng), 0.0, 1.0)
    return values, base


def _report(
    network: FriendshipNetwork,
    users: List[str],
    degrees: np.ndarray,
    metric: str,
    rho: float,
    values: np.ndarray,
    base: np.ndarray,
    config: SynthConfig,
) -> AttributeReport:
    notes = []
    max_abs = None
    achieved = None
    homophily = None
    try:
        full = rank_couple(base, degrees, 1.0, np.random.default_rng(config.seed))
        max_abs = spearman(degrees, full).coefficient
        achieved = spearman(degrees, values).coefficient
        if abs(rho) > max_abs:
            notes.append(f"|rho_ks_target|={abs(rho):.3f} exceeds the feasible {max_abs:.3f} for this degree sequence")
    except SusceptError as e:
        notes.append(f"rho_ks undefined: {e}")
    try:
        homophily = homophily_correlation(network, dict(zip(users, values.tolist())), metric).coefficient
    except SusceptError as e:
        notes.append(f"homophily undefined: {e}")
    for note in notes:
        logger.warning("%s: %s", metric, note)

    return AttributeReport(
        metric=metric,
        rho_ks_target=rho,
        rho_ks_achieved=achieved,
        max_abs_rho_ks=max_abs,
        homophily_strength=config.homophily_strength,
        homophily_achieved=homophily,
        notes=notes,
    )


def assign_attributes(network: FriendshipNetwork, config: SynthConfig) -> Tuple[pd.DataFrame, Dict[str, AttributeReport]]:
    """Planted IAR and SAR per node as a ScoreTable, plus achieved-vs-target reports.

    The IAR column follows `rho_ks_target`, the SAR column `sar_target`.
    With a positive `homophily_strength` the edges of `network` are also
    rewired in place towards similar IAR before SAR is blended over the
    final edges; degrees, and so rho_ks, are kept.
    """
    users = sorted(network.graph.nodes)
    if not users:
        raise DataError("cannot assign attributes on an empty network")
    degrees = np.asarray([network.graph.degree(u) for u in users], dtype=np.float64)
    rng = np.random.default_rng([config.seed, 1])

    iar, iar_base = _plant(users, degrees, network, config.rho_ks_target, config, rng)
    if config.homophily_strength > 0.0:
        assortative_rewire(network, dict(zip(users, iar.tolist())), config.homophily_strength, rng)
    sar, sar_base = _plant(users, degrees, network, config.sar_target, config, rng)

    reports = {
        "iar": _report(network, users, degrees, "iar", config.rho_ks_target, iar, iar_base, config),
        "sar": _report(network, users, degrees, "sar", config.sar_target, sar, sar_base, config),
    }
    scores = [
        SusceptibilityScore(user=u, iar=float(i), sar=float(s), n_exposed=0, n_adopted=0, n_influence_driven=0)
        for u, i, s in zip(users, iar, sar)
    ]
    return score_table(scores), reports
