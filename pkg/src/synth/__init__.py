"""Synthetic networks, planted scores and event logs with known ground truth."""

from .attributes import (
    AttributeReport,
    assign_attributes,
    assortative_rewire,
    blend_neighbors,
    draw_marginal,
    rank_couple,
)
from .config import (
    DegreeDistribution,
    DegreeKind,
    IntensityParams,
    Marginal,
    MarginalKind,
    SynthConfig,
    load_synth_config,
)
from .events import HELLO_URL, EventLogReport, feed_id, generate_event_log, generate_metadata
from .graph import generate_graph, match_stubs, node_id, sample_degrees

__all__ = [
    'HELLO_URL',
    'AttributeReport',
    'DegreeDistribution',
    'DegreeKind',
    'EventLogReport',
    'IntensityParams',
    'Marginal',
    'MarginalKind',
    'SynthConfig',
    'assign_attributes',
    'assortative_rewire',
    'blend_neighbors',
    'draw_marginal',
    'feed_id',
    'generate_event_log',
    'generate_graph',
    'generate_metadata',
    'load_synth_config',
    'match_stubs',
    'node_id',
    'rank_couple',
    'sample_degrees',
]
