"""Subcommand handlers. Each reads its inputs, writes its outputs under
``args.out`` and returns a short summary for the console."""

import argparse
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.analytics import GfpReport, gfp_report
from src.config import Config
from src.errors import DataError, InvariantError, SusceptError, UsageError
from src.ingest import (
    CorpusWindow,
    InteractionEvent,
    UserMeta,
    corpus_summary,
    filter_url_events,
    parse_event_log,
    parse_metadata,
    select_target_users,
    write_event_log,
    write_metadata,
)
from src.manifest import write_json
from src.netbuild import (
    FriendshipNetwork,
    NetworkKind,
    build_friendship_network,
    features_frame,
    node_features,
    read_network,
    write_network,
)
from src.nullmodels import BASELINE_KEYS, STATISTICS, NullConfig, NullModelKind, null_distribution
from src.predict import (
    FEATURE_COLUMNS,
    ForestParams,
    build_feature_matrix,
    compare_models,
    fit_forest,
    fit_friend_linear,
    friend_averages,
    random_search,
    save_forest,
)
from src.suscept import (
    META_COLUMNS,
    METRICS,
    ScoreTable,
    build_histories,
    compute_scores,
    metric_correlation,
    read_score_table,
    resolve_window,
    score_table,
    write_score_table,
)
from src.synth import (
    assign_attributes,
    generate_event_log,
    generate_graph,
    generate_metadata,
    load_synth_config,
)

logger = logging.getLogger(__name__)

NULL_MODEL_ALIASES = {
    "swap": [NullModelKind.EDGE_SWAP],
    "reassign": [NullModelKind.NEIGHBOR_REASSIGN],
    "both": [NullModelKind.EDGE_SWAP, NullModelKind.NEIGHBOR_REASSIGN],
}

TABLE_COLUMNS = [
    "network", "metric", "rho_ks", "P_real", "P_baseline1", "P_baseline2",
    "mean_s", "mean_s_nn_real", "mean_s_nn_baseline1", "mean_s_nn_baseline2",
    "homophily", "n_nodes",
]

SENSITIVITY_COLUMNS = [
    "threshold", "network", "n_nodes", "n_edges", "metric",
    "homophily", "P", "mean_s", "mean_s_nn", "network_gfp_holds",
]


# ---------------------------------------------------------------------------
# shared loaders
# ---------------------------------------------------------------------------

def _seed(args: argparse.Namespace) -> int:
    return Config.SEED if args.seed is None else args.seed


def _metrics(choice: str) -> List[str]:
    return list(METRICS) if choice == "both" else [choice]


def _kinds(choice: str) -> List[NetworkKind]:
    return list(NetworkKind) if choice == "all" else [NetworkKind.parse(choice)]


def load_events(path: Path, strict: bool) -> List[InteractionEvent]:
    with path.open("rb") as stream:
        events, summary = parse_event_log(stream, strict=strict)
    if summary.n_malformed:
        logger.warning("%s: skipped %d malformed lines", path, summary.n_malformed)
    return events


def load_metadata(path: Optional[Path], strict: bool) -> Dict[str, UserMeta]:
    if path is None:
        return {}
    with path.open("rb") as stream:
        metadata, _ = parse_metadata(stream, strict=strict)
    return metadata


def score_corpus(
    events: Sequence[InteractionEvent],
    metadata: Dict[str, UserMeta],
    threshold: int,
    buffer_days: int,
    window_start: Optional[int] = None,
    window_end: Optional[int] = None,
) -> Tuple[ScoreTable, set, CorpusWindow, List[InteractionEvent]]:
    """URL filter, target selection, histories and scores for one threshold."""
    url_events = filter_url_events(events)
    targets = select_target_users(url_events, threshold)
    if not targets:
        raise DataError(f"no user reaches the threshold of {threshold} shared URLs")
    window = resolve_window(url_events, buffer_days, window_start, window_end)
    histories = build_histories(url_events, targets, window)
    scores = [compute_scores(histories[user], window) for user in sorted(targets)]
    return score_table(scores, metadata), targets, window, url_events


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------

def handle_ingest(args: argparse.Namespace) -> Dict[str, Any]:
    out = Path(args.out)
    events = load_events(args.events, args.strict)
    url_events = filter_url_events(events)
    targets = select_target_users(url_events, args.threshold)
    summary = corpus_summary(events, url_events, targets, args.threshold)

    with (out / "events.filtered.jsonl").open("w", encoding="utf-8") as stream:
        write_event_log(url_events, stream)
    (out / "targets.txt").write_text("".join(f"{user}\n" for user in sorted(targets)), encoding="utf-8")
    write_json(out / "ingest_summary.json", summary.to_dict())
    return {"events": len(events), "url_events": len(url_events), "targets": len(targets)}


def handle_score(args: argparse.Namespace) -> Dict[str, Any]:
    out = Path(args.out)
    events = load_events(args.events, args.strict)
    metadata = load_metadata(args.metadata, args.strict)
    table, targets, window, _ = score_corpus(
        events, metadata, args.threshold, args.buffer_days, args.window_start, args.window_end
    )
    write_score_table(table, out / "scores.csv")

    summary: Dict[str, Any] = {
        "threshold": args.threshold,
        "window": window.to_dict(),
        "n_targets": len(targets),
        "n_iar_defined": int(table["iar"].notna().sum()),
        "n_sar_defined": int(table["sar"].notna().sum()),
        "iar_sar_spearman": None,
    }
    try:
        summary["iar_sar_spearman"] = metric_correlation(table).to_dict()
    except SusceptError as e:
        logger.warning("IAR/SAR correlation undefined: %s", e)
    write_json(out / "score_summary.json", summary)
    return {"targets": len(targets), "iar_defined": summary["n_iar_defined"], "sar_defined": summary["n_sar_defined"]}


def handle_network(args: argparse.Namespace) -> Dict[str, Any]:
    out = Path(args.out)
    events = load_events(args.events, args.strict)
    url_events = filter_url_events(events)
    targets = select_target_users(url_events, args.threshold)
    window = resolve_window(url_events, args.buffer_days) if url_events else None

    result = {}
    for kind in _kinds(args.kind):
        network = build_friendship_network(url_events, targets, kind, window)
        write_network(network, out / f"network.{kind.value}.edgelist")
        if network.n_nodes:
            features_frame(node_features(network)).to_csv(out / f"node_features.{kind.value}.csv", index=False)
        else:
            logger.warning("%s network is empty; no node features written", kind.value)
        result[kind.value] = f"{network.n_nodes} nodes / {network.n_edges} edges"
    return result


def _load_network_and_scores(args: argparse.Namespace) -> Tuple[FriendshipNetwork, ScoreTable]:
    return read_network(args.network), read_score_table(args.scores)


def _write_report(out: Path, report: GfpReport) -> None:
    stem = f"{report.kind}.{report.metric}"
    write_json(out / f"gfp.{stem}.json", report.to_dict())
    report.grid.write_csv(out / f"grid.{stem}.csv")


def handle_analyze(args: argparse.Namespace) -> Dict[str, Any]:
    out = Path(args.out)
    network, scores = _load_network_and_scores(args)
    result = {}
    for metric in _metrics(args.metric):
        report = gfp_report(network, scores, metric, args.grid_s_width)
        _write_report(out, report)
        result[metric] = f"P={report.P:.3f} <s>={report.mean_s:.4f} <s>_nn={report.mean_s_nn:.4f}"
    return result


def handle_null(args: argparse.Namespace) -> Dict[str, Any]:
    out = Path(args.out)
    network, scores = _load_network_and_scores(args)
    statistics = sorted(STATISTICS) if args.statistic == "all" else [args.statistic]
    result = {}
    for metric in _metrics(args.metric):
        report = gfp_report(network, scores, metric, args.grid_s_width)
        for model in NULL_MODEL_ALIASES[args.model]:
            config = NullConfig(model=model, n_reps=args.reps, swap_multiplier=args.swap_mult, seed=_seed(args))
            block: Dict[str, Any] = {"model": model.value, "n_reps": args.reps}
            for statistic in statistics:
                try:
                    summary = null_distribution(network, scores, statistic, config, metric, args.jobs)
                    block[statistic] = summary.to_dict()
                except InvariantError:
                    raise
                except SusceptError as e:
                    block[statistic] = None
                    report.notes.append(f"{model.value} {statistic} undefined: {e}")
            report.baselines[BASELINE_KEYS[model]] = block
        _write_report(out, report)
        result[metric] = ", ".join(sorted(report.baselines))
    return result


def _write_importances(path: Path, importances: Dict[str, float]) -> None:
    frame = pd.DataFrame(list(importances.items()), columns=["feature", "importance"])
    frame.to_csv(path, index=False)


def available_columns(scores: ScoreTable) -> List[str]:
    """Feature columns, leaving out metadata absent for every user."""
    missing = [c for c in META_COLUMNS if not scores[c].notna().any()]
    if missing:
        logger.warning("no metadata for %s; predicting without those columns", ", ".join(missing))
    return [c for c in FEATURE_COLUMNS if c not in missing]


def handle_predict(args: argparse.Namespace) -> Dict[str, Any]:
    out = Path(args.out)
    network, scores = _load_network_and_scores(args)
    seed = _seed(args)
    averages = friend_averages(network, scores)
    feats = node_features(network) if args.model in ("forest", "both") else {}
    columns = available_columns(scores)
    result = {}

    for metric in _metrics(args.metric):
        other = "sar" if metric == "iar" else "iar"
        linear = forest = None
        if args.model in ("linear", "both"):
            linear = fit_friend_linear(scores, averages[metric], metric, averages[other], args.test_frac, seed)
            write_json(out / f"fit.{metric}.linear.json", linear.to_dict())
            result[f"{metric}/linear"] = f"R²_test={linear.r2_test}"

        if args.model in ("forest", "both"):
            matrix = build_feature_matrix(scores, network, feats, metric, columns)
            if args.search:
                grid = [int(v) for v in args.n_estimators_grid.split(",")] if args.n_estimators_grid else None
                params = random_search(matrix.X, matrix.y, args.n_settings, args.folds, seed, args.jobs, grid)
            else:
                params = ForestParams.for_metric(metric, seed)
                if args.n_estimators:
                    params = ForestParams(**{**params.to_dict(), "n_estimators": args.n_estimators})
            forest, model = fit_forest(matrix, params, args.test_frac, seed, args.shuffles, args.jobs)
            write_json(out / f"fit.{metric}.forest.json", forest.to_dict())
            if forest.importances is not None:
                _write_importances(out / f"importances.{metric}.csv", forest.importances)
            save_forest(model, out / f"model.{metric}.json", matrix.columns)
            result[f"{metric}/forest"] = f"R²_test={forest.r2_test}"

        if linear is not None and forest is not None:
            write_json(out / f"comparison.{metric}.json", compare_models(linear, forest))
    return result


def handle_synth(args: argparse.Namespace) -> Dict[str, Any]:
    out = Path(args.out)
    config = load_synth_config(args.config, seed=args.seed)
    args.seed = config.seed
    network = generate_graph(config)
    planted, attribute_reports = assign_attributes(network, config)
    window = config.window()
    events, event_report = generate_event_log(network, planted, window, config.intensity, config.seed)
    metadata = generate_metadata(network, config.seed)

    with (out / "events.jsonl").open("w", encoding="utf-8") as stream:
        write_event_log(events, stream)
    with (out / "metadata.jsonl").open("w", encoding="utf-8") as stream:
        write_metadata(metadata.values(), stream)
    write_network(network, out / "network.planted.edgelist")
    planted.to_csv(out / "planted_scores.csv", index=False, columns=["user", "iar", "sar"])
    write_json(out / "synth_summary.json", {
        "config": config.to_flat(),
        "window": window.to_dict(),
        "n_nodes": network.n_nodes,
        "n_edges": network.n_edges,
        "graph_notes": network.notes,
        "attributes": {metric: report.to_dict() for metric, report in attribute_reports.items()},
        "events": event_report.to_dict(),
    })
    return {"nodes": network.n_nodes, "edges": network.n_edges, "events": len(events)}


def _baseline_mean(report: dict, key: str, statistic: str) -> Optional[float]:
    block = report.get(key) or {}
    summary = block.get(statistic)
    return summary.get("null_mean") if summary else None


def table_rows(reports: Sequence[dict]) -> pd.DataFrame:
    """Table of rho_ks, P and <s>/<s>_nn with baseline columns, one row per report."""
    rows = []
    for report in reports:
        rows.append({
            "network": report["kind"],
            "metric": report["metric"],
            "rho_ks": (report.get("rho_ks") or {}).get("coefficient"),
            "P_real": report["P"],
            "P_baseline1": _baseline_mean(report, "baseline1", "P"),
            "P_baseline2": _baseline_mean(report, "baseline2", "P"),
            "mean_s": report["mean_s"],
            "mean_s_nn_real": report["mean_s_nn"],
            "mean_s_nn_baseline1": _baseline_mean(report, "baseline1", "mean_s_nn"),
            "mean_s_nn_baseline2": _baseline_mean(report, "baseline2", "mean_s_nn"),
            "homophily": (report.get("homophily") or {}).get("coefficient"),
            "n_nodes": report["n_nodes_used"],
        })
    order = {kind.value: i for i, kind in enumerate(NetworkKind)}
    rows.sort(key=lambda r: (order.get(r["network"], len(order)), r["network"], r["metric"]))
    return pd.DataFrame(rows, columns=TABLE_COLUMNS)


def handle_report(args: argparse.Namespace) -> Dict[str, Any]:
    out = Path(args.out)
    paths = sorted({p for directory in args.inputs for p in Path(directory).glob("gfp.*.json")})
    if not paths:
        raise DataError(f"no gfp.*.json reports found in {', '.join(map(str, args.inputs))}")
    reports = []
    for path in paths:
        try:
            reports.append(json.loads(path.read_text(encoding="utf-8")))
        except json.JSONDecodeError as e:
            raise DataError(f"{path}: invalid JSON: {e}") from e
    table = table_rows(reports)
    table.to_csv(out / "table.csv", index=False, na_rep="")
    return {"rows": len(table)}


def handle_sensitivity(args: argparse.Namespace) -> Dict[str, Any]:
    out = Path(args.out)
    try:
        thresholds = sorted({int(v) for v in args.thresholds.split(",") if v.strip()})
    except ValueError as e:
        raise UsageError(f"--thresholds must be comma-separated integers: {e}") from e
    if not thresholds or thresholds[0] <= 0:
        raise UsageError("--thresholds needs positive integers")
    events = load_events(args.events, args.strict)

    rows = []
    for threshold in thresholds:
        try:
            table, targets, window, url_events = score_corpus(events, {}, threshold, args.buffer_days)
        except InvariantError:
            raise
        except SusceptError as e:
            logger.warning("threshold %d skipped: %s", threshold, e)
            continue
        for kind in NetworkKind:
            network = build_friendship_network(url_events, targets, kind, window)
            for metric in METRICS:
                row: Dict[str, Any] = {
                    "threshold": threshold, "network": kind.value,
                    "n_nodes": network.n_nodes, "n_edges": network.n_edges, "metric": metric,
                    "homophily": np.nan, "P": np.nan, "mean_s": np.nan, "mean_s_nn": np.nan,
                    "network_gfp_holds": None,
                }
                try:
                    report = gfp_report(network, table, metric, args.grid_s_width)
                    row.update({
                        "homophily": report.homophily.coefficient if report.homophily else np.nan,
                        "P": report.P,
                        "mean_s": report.mean_s,
                        "mean_s_nn": report.mean_s_nn,
                        "network_gfp_holds": report.network_gfp_holds,
                    })
                except InvariantError:
                    raise
                except SusceptError as e:
                    logger.warning("threshold %d %s/%s: %s", threshold, kind.value, metric, e)
                rows.append(row)

    pd.DataFrame(rows, columns=SENSITIVITY_COLUMNS).to_csv(out / "sensitivity.csv", index=False, na_rep="")
    return {"thresholds": ",".join(map(str, thresholds)), "rows": len(rows)}


HANDLERS = {
    "ingest": handle_ingest,
    "score": handle_score,
    "network": handle_network,
    "analyze": handle_analyze,
    "null": handle_null,
    "predict": handle_predict,
    "synth": handle_synth,
    "report": handle_report,
    "sensitivity": handle_sensitivity,
}
