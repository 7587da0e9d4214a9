"""Unit tests for exposure/adoption histories and IAR/SAR scores."""

import io
import math
import random
import pandas as pd
import pytest
import sys
import os

# Add project root to path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.errors import DataError, InvariantError
from src.ingest import CorpusWindow, EventKind, InteractionEvent, UserMeta
from src.suscept import (
    SCORE_COLUMNS,
    UserHistory,
    build_adoption_sets,
    build_exposure_index,
    build_histories,
    compute_scores,
    metric_correlation,
    metric_values,
    read_score_table,
    resolve_window,
    score_table,
    write_score_table,
)

WINDOW = CorpusWindow(start=0, buffer_end=100, end=1000)


def ev(event_id, kind, author, target, ts, urls):
    return InteractionEvent(event_id, EventKind(kind), author, target, ts, tuple(urls))


def brute_force_scores(events, target, window):
    """Independent nested-loop derivation of E, A and the scores for one user."""
    exposures = {}
    for i in events:
        if i.author != target or i.target_author is None or not window.contains(i.timestamp):
            continue
        source = i.target_author
        first = min(
            e.timestamp for e in events
            if e.author == target and e.target_author == source and window.contains(e.timestamp)
        )
        for j in events:
            if j.author == source and j.timestamp > first and window.contains(j.timestamp):
                for url in j.urls:
                    exposures[url] = min(exposures.get(url, j.timestamp), j.timestamp)
    adoptions = {}
    for j in events:
        if j.author == target and j.timestamp > window.buffer_end and window.contains(j.timestamp):
            for url in j.urls:
                adoptions[url] = min(adoptions.get(url, j.timestamp), j.timestamp)
    influenced = sum(1 for url, t in adoptions.items() if url in exposures and exposures[url] < t)
    iar = influenced / len(exposures) if exposures else None
    sar = 1 - influenced / len(adoptions) if adoptions else None
    return exposures, adoptions, iar, sar


class TestExposureIndex:
    """Tests for build_exposure_index."""

    def test_exposure_after_first_interaction(self):
        """Posts of a source after the first interaction are exposures."""
        events = [
            ev("1", "original", "s", None, 5, ["y"]),
            ev("2", "retweet", "t", "s", 10, ["y"]),
            ev("3", "original", "s", None, 20, ["x"]),
            ev("4", "original", "s", None, 30, ["x"]),
        ]
        history = build_exposure_index(events, {"t"}, WINDOW)["t"]
        assert history.first_interaction == {"s": 10}
        assert history.exposures == {"x": 20}

    def test_exposure_is_directional(self):
        """The source is not exposed to the target's posts."""
        events = [
            ev("1", "retweet", "t", "s", 10, ["a"]),
            ev("2", "original", "t", None, 20, ["b"]),
        ]
        histories = build_exposure_index(events, {"t", "s"}, WINDOW)
        assert histories["s"].exposures == {}

    def test_same_second_is_not_exposure(self):
        """A post at the interaction second is not strictly after it."""
        events = [
            ev("1", "original", "s", None, 10, ["x"]),
            ev("2", "reply", "t", "s", 10, ["z"]),
        ]
        assert build_exposure_index(events, {"t"}, WINDOW)["t"].exposures == {}

    def test_unsorted_events_rejected(self):
        """Histories need time-sorted input."""
        events = [ev("1", "original", "a", None, 5, ["x"]), ev("2", "original", "a", None, 1, ["y"])]
        with pytest.raises(DataError):
            build_exposure_index(events, {"a"}, WINDOW)


class TestAdoptionSets:
    """Tests for build_adoption_sets."""

    def test_buffer_is_strict(self):
        """Only adoptions strictly after buffer_end count."""
        events = [
            ev("1", "original", "u", None, 99, ["early"]),
            ev("2", "original", "u", None, 100, ["edge"]),
            ev("3", "original", "u", None, 101, ["late"]),
        ]
        history = build_adoption_sets(events, {"u"}, WINDOW)["u"]
        assert set(history.adoptions_all) == {"early", "edge", "late"}
        assert set(history.adoptions) == {"late"}

    def test_every_url_of_a_retweet_is_adopted(self):
        """A reshare carrying two URLs adopts both."""
        events = [ev("1", "retweet", "u", "v", 200, ["a", "b"])]
        history = build_adoption_sets(events, {"u"}, WINDOW)["u"]
        assert history.adoptions == {"a": 200, "b": 200}


class TestComputeScores:
    """Tests for compute_scores."""

    def test_mixed_example(self):
        """Four exposures, three adoptions, two influence-driven."""
        history = UserHistory(
            user="u",
            exposures={"a": 150, "b": 150, "c": 150, "d": 150},
            adoptions={"b": 200, "d": 300, "e": 200},
        )
        score = compute_scores(history, WINDOW)
        assert score.iar == pytest.approx(0.5)
        assert score.sar == pytest.approx(1 - 2 / 3)
        assert score.n_influence_driven == 2

    def test_no_adoptions_leaves_sar_undefined(self):
        """Exposed but never adopting: IAR 0, SAR undefined."""
        score = compute_scores(UserHistory(user="u", exposures={"a": 150}), WINDOW)
        assert score.iar == 0.0
        assert score.sar is None

    def test_no_exposures_leaves_iar_undefined(self):
        """Never exposed: IAR undefined, SAR 1."""
        score = compute_scores(UserHistory(user="u", adoptions={"e": 200}), WINDOW)
        assert score.iar is None
        assert score.sar == 1.0

    def test_simultaneous_exposure_counts_as_spontaneous(self):
        """Exposure and adoption at the same second is not influence-driven."""
        history = UserHistory(user="u", exposures={"a": 200}, adoptions={"a": 200})
        score = compute_scores(history, WINDOW)
        assert score.n_influence_driven == 0
        assert score.sar == 1.0

    def test_buffered_adoption_is_an_invariant_violation(self):
        """An adoption inside the buffer means histories were built wrongly."""
        with pytest.raises(InvariantError):
            compute_scores(UserHistory(user="u", adoptions={"a": 50}), WINDOW)


class TestBruteForceOracle:
    """Histories match a nested-loop re-derivation on small random logs."""

    @pytest.mark.parametrize("seed", range(12))
    def test_random_logs(self, seed):
        """Exposure sets, adoption sets and scores agree with the oracle."""
        rng = random.Random(seed)
        users = ["a", "b", "c", "d"]
        urls = [f"x{i}" for i in range(6)]
        events = []
        for i in range(rng.randint(10, 50)):
            kind = rng.choice(["original", "retweet", "quote", "reply"])
            author = rng.choice(users)
            target = None if kind == "original" else rng.choice([u for u in users if u != author])
            chosen = rng.sample(urls, rng.randint(1, 3))
            events.append(ev(f"e{i:03d}", kind, author, target, rng.randint(0, 300), chosen))
        events.sort(key=lambda e: (e.timestamp, e.event_id))
        window = CorpusWindow(start=0, buffer_end=100, end=300)

        histories = build_histories(events, set(users), window)
        for user in users:
            exposures, adoptions, iar, sar = brute_force_scores(events, user, window)
            assert histories[user].exposures == exposures
            assert histories[user].adoptions == adoptions
            score = compute_scores(histories[user], window)
            assert score.iar == (None if iar is None else pytest.approx(iar))
            assert score.sar == (None if sar is None else pytest.approx(sar))


class TestMonotonicity:
    """Adding unrelated adoptions or exposures moves scores the right way."""

    def test_extra_spontaneous_adoption(self):
        """A never-exposed adoption keeps IAR and raises SAR."""
        base = UserHistory(user="u", exposures={"a": 150, "b": 150}, adoptions={"a": 200})
        more = UserHistory(user="u", exposures=dict(base.exposures), adoptions={"a": 200, "z": 200})
        before, after = compute_scores(base, WINDOW), compute_scores(more, WINDOW)
        assert after.iar == before.iar
        assert after.sar >= before.sar

    def test_extra_unadopted_exposure(self):
        """A never-adopted exposure lowers IAR and keeps SAR."""
        base = UserHistory(user="u", exposures={"a": 150}, adoptions={"a": 200})
        more = UserHistory(user="u", exposures={"a": 150, "q": 150}, adoptions={"a": 200})
        before, after = compute_scores(base, WINDOW), compute_scores(more, WINDOW)
        assert after.iar <= before.iar
        assert after.sar == before.sar


class TestScoreTable:
    """Tests for the ScoreTable helpers."""

    def scores(self):
        return [
            compute_scores(UserHistory(user="c", exposures={"a": 150}), WINDOW),
            compute_scores(UserHistory(user="a", exposures={"a": 150}, adoptions={"a": 200}), WINDOW),
            compute_scores(UserHistory(user="b", adoptions={"e": 200}), WINDOW),
        ]

    def test_rows_and_metadata(self):
        """One sorted row per user; missing metadata stays null."""
        metadata = {"a": UserMeta("a", 1, 2, 3, 4), "b": UserMeta("b", 5, 6, 7, 8)}
        table = score_table(self.scores(), metadata)
        assert list(table.columns) == SCORE_COLUMNS
        assert list(table["user"]) == ["a", "b", "c"]
        assert pd.isna(table.loc[2, "followers_count"])
        assert math.isnan(table.loc[2, "sar"])

    def test_empty_input(self):
        """No scores give an empty table with the full schema."""
        table = score_table([])
        assert len(table) == 0
        assert list(table.columns) == SCORE_COLUMNS

    def test_csv_roundtrip_keeps_undefined(self):
        """Undefined scores survive CSV as empty fields."""
        table = score_table(self.scores())
        buffer = io.StringIO()
        write_score_table(table, buffer)
        buffer.seek(0)
        again = read_score_table(buffer)
        assert metric_values(again, "iar") == metric_values(table, "iar")
        assert metric_values(again, "sar") == {"a": 0.0, "b": 1.0}

    def test_metric_values_skips_nan_in_mappings(self):
        """Plain mappings drop None and NaN entries."""
        assert metric_values({"a": 0.5, "b": None, "c": float("nan")}, "iar") == {"a": 0.5}

    def test_metric_correlation(self):
        """IAR and SAR move in opposite directions on a mixed fixture."""
        rows = []
        for i, (n_exposed, n_adopted, influenced) in enumerate([(10, 10, 1), (10, 10, 5), (10, 10, 9), (10, 10, 3)]):
            urls = [f"x{j}" for j in range(n_exposed)]
            exposures = {url: 150 for url in urls}
            adoptions = {url: 200 for url in urls[:influenced]}
            adoptions.update({f"s{j}": 200 for j in range(n_adopted - influenced)})
            rows.append(compute_scores(UserHistory(user=f"u{i}", exposures=exposures, adoptions=adoptions), WINDOW))
        result = metric_correlation(score_table(rows))
        assert result.coefficient == pytest.approx(-1.0)


class TestResolveWindow:
    """Tests for resolve_window."""

    def test_infers_bounds(self):
        """Start and end default to the first and last timestamps."""
        events = [ev("1", "original", "a", None, 10, ["x"]), ev("2", "original", "a", None, 10 + 90 * 86400, ["y"])]
        window = resolve_window(events, buffer_days=60)
        assert window.start == 10
        assert window.buffer_end == 10 + 60 * 86400
        assert window.end == 10 + 90 * 86400

    def test_empty_log_needs_explicit_bounds(self):
        """Nothing to infer from an empty log."""
        with pytest.raises(DataError):
            resolve_window([])


