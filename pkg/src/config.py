import os
from typing import Any, Callable, Dict, Optional

from dotenv import load_dotenv

from src.errors import UsageError

load_dotenv()

ENV_PREFIX = "SUSCEPT_"


class Config:
    """Configuration for the susceptinet pipeline.

    Class attributes are the built-in defaults. `flag_default` layers the
    SUSCEPT_<DEST> environment on top when the parser is built.
    """

    VERSION = "0.3.0"

    # Corpus selection
    THRESHOLD = 10
    BUFFER_DAYS = 60
    SENSITIVITY_THRESHOLDS = "5,10,20"

    # Analytics
    GRID_S_WIDTH = 0.05

    # Null models
    NULL_REPS = 100
    SWAP_MULTIPLIER = 10

    # Prediction
    TEST_FRAC = 0.2
    N_SETTINGS = 100
    CV_FOLDS = 5
    PERMUTATION_SHUFFLES = 10

    # Forest defaults per metric: n_estimators, max_features, max_depth,
    # min_samples_split, min_samples_leaf
    FOREST_DEFAULTS = {
        "iar": (750, 4, 70, 5, 2),
        "sar": (800, 4, 80, 10, 2),
    }

    # Runtime
    SEED = 0
    N_JOBS = 1
    LOG_LEVEL = "INFO"

    @staticmethod
    def env_name(dest: str) -> str:
        """Environment variable overriding the flag stored at `dest`."""
        return ENV_PREFIX + dest.upper()

    @classmethod
    def flag_default(
        cls,
        dest: str,
        fallback: Any,
        cast: Optional[Callable[[str], Any]] = None
    ) -> Any:
        """Resolve a flag default: environment first, then `fallback`.

        Args:
            dest: argparse destination name of the flag
            fallback: value used when the environment does not set it
            cast: converter for the raw environment string (defaults to the
                type of `fallback`)

        Returns:
            The resolved default value
        """
        raw = os.getenv(cls.env_name(dest))
        if raw is None:
            return fallback
        if cast is None:
            if isinstance(fallback, bool):
                return raw.strip().lower() in ("1", "true", "yes", "on")
            cast = type(fallback) if fallback is not None else str
        try:
            return cast(raw)
        except ValueError as e:
            raise UsageError(f"{cls.env_name(dest)}={raw!r} is not valid: {e}") from e

    @classmethod
    def validate_config(cls, args: Any) -> None:
        """Validate resolved CLI values before anything is computed."""
        errors = []
        values: Dict[str, Any] = vars(args)

        threshold = values.get("threshold")
        if threshold is not None and threshold <= 0:
            errors.append(f"--threshold must be positive, got {threshold}")

        buffer_days = values.get("buffer_days")
        if buffer_days is not None and buffer_days < 0:
            errors.append(f"--buffer-days must be non-negative, got {buffer_days}")

        width = values.get("grid_s_width")
        if width is not None and not 0.0 < width <= 1.0:
            errors.append(f"--grid-s-width must be in (0, 1], got {width}")

        for name in ("reps", "swap_mult", "n_settings", "shuffles", "n_estimators"):
            value = values.get(name)
            if value is not None and value < 1:
                errors.append(f"--{name.replace('_', '-')} must be >= 1, got {value}")

        folds = values.get("folds")
        if folds is not None and folds < 2:
            errors.append(f"--folds must be >= 2, got {folds}")

        test_frac = values.get("test_frac")
        if test_frac is not None and not 0.0 < test_frac < 1.0:
            errors.append(f"--test-frac must be in (0, 1), got {test_frac}")

        jobs = values.get("jobs")
        if jobs is not None and jobs == 0:
            errors.append("--jobs must be non-zero")

        if errors:
            raise UsageError("\n  - ".join([""] + errors))

    @classmethod
    def get_forest_defaults(cls, metric: str) -> Dict[str, int]:
        """Default random forest parameters for a susceptibility metric."""
        metric = metric.lower()
        if metric not in cls.FOREST_DEFAULTS:
            raise UsageError(f"Unknown metric: {metric}")
        n_estimators, max_features, max_depth, split, leaf = cls.FOREST_DEFAULTS[metric]
        return {
            "n_estimators": n_estimators,
            "max_features": max_features,
            "max_depth": max_depth,
            "min_samples_split": split,
            "min_samples_leaf": leaf,
        }
