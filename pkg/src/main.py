"""Command-line entry point for susceptinet."""

import argparse
import logging
import os
import sys
import traceback
from pathlib import Path
from typing import List, Optional, Sequence

# Add project root to Python path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.config import Config
from src.errors import SusceptError, UsageError
from src.manifest import RunManifest, json_safe

logger = logging.getLogger("susceptinet")


class UsageArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting with status 2."""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=Config.flag_default("seed", None, int),
                        help="root seed for every random draw")
    common.add_argument("--out", type=Path, default=Path(Config.flag_default("out", "out")),
                        help="output directory (created if missing)")
    common.add_argument("--strict", action="store_true", default=Config.flag_default("strict", False),
                        help="abort on the first malformed input line")
    common.add_argument("--log-level", default=Config.flag_default("log_level", Config.LOG_LEVEL),
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("--jobs", type=int, default=Config.flag_default("jobs", Config.N_JOBS),
                        help="parallel workers; -1 uses every core")
    return common


def _corpus_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threshold", type=int, default=Config.flag_default("threshold", Config.THRESHOLD),
                        help="minimum URL-bearing posts for a target user")
    parser.add_argument("--buffer-days", type=int,
                        default=Config.flag_default("buffer_days", Config.BUFFER_DAYS))


def _network_score_inputs(parser: argparse.ArgumentParser) -> None:
    network = Config.flag_default("network", None, Path)
    scores = Config.flag_default("scores", None, Path)
    parser.add_argument("--network", type=Path, default=network, required=network is None,
                        help="edge list written by `network`")
    parser.add_argument("--scores", type=Path, default=scores, required=scores is None,
                        help="scores.csv written by `score`")


def _network_score_flags(parser: argparse.ArgumentParser) -> None:
    _network_score_inputs(parser)
    parser.add_argument("--metric", choices=["iar", "sar", "both"],
                        default=Config.flag_default("metric", "both"))
    parser.add_argument("--grid-s-width", type=float,
                        default=Config.flag_default("grid_s_width", Config.GRID_S_WIDTH))


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = UsageArgumentParser(
        prog="susceptinet",
        description="Susceptibility scores, friendship networks and the generalized friendship paradox.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {Config.VERSION}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=UsageArgumentParser)
    sub.required = True

    p = sub.add_parser("ingest", parents=[common], help="filter URL events and select target users")
    p.add_argument("events", type=Path)
    _corpus_flags(p)

    p = sub.add_parser("score", parents=[common], help="compute IAR and SAR per target user")
    p.add_argument("events", type=Path)
    p.add_argument("--metadata", type=Path, default=Config.flag_default("metadata", None, Path))
    p.add_argument("--window-start", type=int, default=Config.flag_default("window_start", None, int))
    p.add_argument("--window-end", type=int, default=Config.flag_default("window_end", None, int))
    _corpus_flags(p)

    p = sub.add_parser("network", parents=[common], help="build reciprocal friendship networks")
    p.add_argument("events", type=Path)
    p.add_argument("--kind", choices=["interaction", "retweet", "mention", "all"],
                   default=Config.flag_default("kind", "all"))
    _corpus_flags(p)

    p = sub.add_parser("analyze", parents=[common], help="paradox statistics, grid and homophily")
    _network_score_flags(p)

    p = sub.add_parser("null", parents=[common], help="compare statistics against randomized networks")
    _network_score_flags(p)
    p.add_argument("--model", choices=["swap", "reassign", "both"], default=Config.flag_default("model", "both"))
    p.add_argument("--reps", type=int, default=Config.flag_default("reps", Config.NULL_REPS))
    p.add_argument("--swap-mult", type=int, default=Config.flag_default("swap_mult", Config.SWAP_MULTIPLIER))
    p.add_argument("--statistic", choices=["homophily", "P", "mean_s_nn", "all"],
                   default=Config.flag_default("statistic", "all"))

    p = sub.add_parser("predict", parents=[common], help="linear and random forest prediction")
    _network_score_inputs(p)
    p.add_argument("--metric", choices=["iar", "sar", "both"], default=Config.flag_default("metric", "both"))
    p.add_argument("--model", choices=["linear", "forest", "both"], default=Config.flag_default("model", "both"))
    p.add_argument("--search", action="store_true", default=Config.flag_default("search", False),
                   help="random search over forest parameters instead of the fixed defaults")
    p.add_argument("--n-settings", type=int, default=Config.flag_default("n_settings", Config.N_SETTINGS))
    p.add_argument("--folds", type=int, default=Config.flag_default("folds", Config.CV_FOLDS))
    p.add_argument("--test-frac", type=float, default=Config.flag_default("test_frac", Config.TEST_FRAC))
    p.add_argument("--shuffles", type=int, default=Config.flag_default("shuffles", Config.PERMUTATION_SHUFFLES))
    p.add_argument("--n-estimators", type=int, default=Config.flag_default("n_estimators", None, int),
                   help="override the default tree count")
    p.add_argument("--n-estimators-grid", default=Config.flag_default("n_estimators_grid", None, str),
                   help="comma-separated tree counts for --search")

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic corpus with planted scores")
    p.add_argument("config", type=Path, help="JSON or .env generator configuration")

    p = sub.add_parser("report", parents=[common], help="collect gfp reports into one table")
    p.add_argument("inputs", type=Path, nargs="+", help="directories holding gfp.*.json")

    p = sub.add_parser("sensitivity", parents=[common], help="repeat the analysis over several thresholds")
    p.add_argument("events", type=Path)
    p.add_argument("--thresholds", default=Config.flag_default("thresholds", Config.SENSITIVITY_THRESHOLDS))
    p.add_argument("--buffer-days", type=int, default=Config.flag_default("buffer_days", Config.BUFFER_DAYS))
    p.add_argument("--grid-s-width", type=float,
                   default=Config.flag_default("grid_s_width", Config.GRID_S_WIDTH))

    return parser


def _input_paths(args: argparse.Namespace) -> List[Path]:
    paths = []
    for name in ("events", "metadata", "network", "scores", "config"):
        value = getattr(args, name, None)
        if value is not None:
            paths.append(value)
    paths.extend(getattr(args, "inputs", None) or [])
    return paths


def _check_inputs(paths: Sequence[Path]) -> None:
    missing = [str(p) for p in paths if not p.exists()]
    if missing:
        raise UsageError(f"input not found: {', '.join(missing)}")


def _run(args: argparse.Namespace) -> None:
    from src.commands import HANDLERS

    Config.validate_config(args)
    inputs = _input_paths(args)
    _check_inputs(inputs)
    if getattr(args, "window_start", None) is not None and getattr(args, "window_end", None) is not None \
            and args.window_start > args.window_end:
        raise UsageError("--window-start is after --window-end")

    args.out.mkdir(parents=True, exist_ok=True)
    flags = dict(vars(args))
    manifest = RunManifest(subcommand=args.command, flags=json_safe(flags), seed=None)
    manifest.add_inputs(inputs)

    print(f"\n🚀 susceptinet {args.command} -> {args.out}")
    summary = HANDLERS[args.command](args)
    manifest.seed = Config.SEED if args.seed is None else args.seed
    manifest.finish()
    manifest.write(args.out)

    for key, value in summary.items():
        print(f"✓ {key}: {value}")
    print(f"✓ done in {manifest.duration_seconds:.2f}s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse `argv`, run the subcommand and return the process exit code."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"❌ Usage error: {e}", file=sys.stderr)
        return e.exit_code
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        _run(args)
    except SusceptError as e:
        label = type(e).__name__
        print(f"❌ {label}: {e}", file=sys.stderr)
        diagnostics = getattr(e, "diagnostics", None)
        if diagnostics:
            logger.error("diagnostics: %s", diagnostics)
        return e.exit_code
    except KeyboardInterrupt:
        print("\n⚠️  Interrupted", file=sys.stderr)
        return 130
    except Exception as e:
        print(f"❌ Unexpected error: {e}", file=sys.stderr)
        logger.error(traceback.format_exc())
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
