"""Synthetic corpus configuration, read from JSON or key=value files."""

import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Union

from dotenv import dotenv_values

from src.errors import UsageError
from src.ingest import SECONDS_PER_DAY, CorpusWindow

DEFAULT_START = 1577836800  # 2020-01-01T00:00:00Z


class DegreeKind(str, Enum):
    POWERLAW = "powerlaw"
    REGULAR = "regular"
    POISSON = "poisson"


class MarginalKind(str, Enum):
    BETA = "beta"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class DegreeDistribution:
    kind: DegreeKind = DegreeKind.POWERLAW
    gamma: float = 2.5
    k_min: int = 1
    k_max: Optional[int] = None  # floor(sqrt(n)) when unset
    k: int = 3
    lam: float = 4.0


@dataclass(frozen=True)
class Marginal:
    kind: MarginalKind = MarginalKind.BETA
    a: float = 2.0
    b: float = 5.0


@dataclass(frozen=True)
class IntensityParams:
    """Event volume; posts_scale 0 emits URL-free handshakes only."""

    posts_scale: float = 1.0
    exposures_per_node: int = 250
    max_delay: int = 3600
    min_shares: int = 20
    max_spontaneous: int = 5000


@dataclass(frozen=True)
class SynthConfig:
    n_nodes: int = 1000
    degree_dist: DegreeDistribution = field(default_factory=DegreeDistribution)
    rho_ks_target: float = 0.0
    sar_rho_ks_target: Optional[float] = None  # -rho_ks_target when unset
    homophily_strength: float = 0.0
    metric_marginal: Marginal = field(default_factory=Marginal)
    seed: int = 0
    intensity: IntensityParams = field(default_factory=IntensityParams)
    start: int = DEFAULT_START
    buffer_days: int = 60
    duration_days: int = 120

    def __post_init__(self):
        errors = []
        if self.n_nodes < 2:
            errors.append(f"n_nodes must be >= 2, got {self.n_nodes}")
        for name in ("rho_ks_target", "sar_rho_ks_target"):
            value = getattr(self, name)
            if value is not None and not -1.0 <= value <= 1.0:
                errors.append(f"{name} must be in [-1, 1], got {value}")
        if not 0.0 <= self.homophily_strength <= 1.0:
            errors.append(f"homophily_strength must be in [0, 1], got {self.homophily_strength}")
        dist = self.degree_dist
        if dist.kind is DegreeKind.POWERLAW and (dist.gamma <= 1.0 or dist.k_min < 1):
            errors.append("powerlaw needs gamma > 1 and k_min >= 1")
        if dist.kind is DegreeKind.REGULAR and dist.k < 1:
            errors.append(f"regular degree must be >= 1, got {dist.k}")
        if dist.kind is DegreeKind.POISSON and dist.lam <= 0:
            errors.append(f"poisson lam must be positive, got {dist.lam}")
        marginal = self.metric_marginal
        if marginal.kind is MarginalKind.BETA and (marginal.a <= 0 or marginal.b <= 0):
            errors.append("beta marginal needs a > 0 and b > 0")
        intensity = self.intensity
        if intensity.posts_scale < 0 or intensity.exposures_per_node < 0:
            errors.append("posts_scale and exposures_per_node must be non-negative")
        if intensity.max_delay < 1 or intensity.min_shares < 0 or intensity.max_spontaneous < 0:
            errors.append("max_delay must be >= 1; min_shares and max_spontaneous >= 0")
        if self.buffer_days < 1 or self.duration_days <= self.buffer_days:
            errors.append("need 1 <= buffer_days < duration_days")
        if errors:
            raise UsageError("\n  - ".join(["invalid synth config:"] + errors))

    @property
    def sar_target(self) -> float:
        return -self.rho_ks_target if self.sar_rho_ks_target is None else self.sar_rho_ks_target

    def window(self) -> CorpusWindow:
        return CorpusWindow(
            start=self.start,
            buffer_end=self.start + self.buffer_days * SECONDS_PER_DAY,
            end=self.start + self.duration_days * SECONDS_PER_DAY,
        )

    def to_flat(self) -> Dict[str, Any]:
        """Flat key/value view, the same keys `from_flat` accepts."""
        flat: Dict[str, Any] = {
            "n_nodes": self.n_nodes,
            "degree_dist": self.degree_dist.kind.value,
            "gamma": self.degree_dist.gamma,
            "k_min": self.degree_dist.k_min,
            "k_max": self.degree_dist.k_max,
            "k": self.degree_dist.k,
            "lam": self.degree_dist.lam,
            "rho_ks_target": self.rho_ks_target,
            "sar_rho_ks_target": self.sar_rho_ks_target,
            "homophily_strength": self.homophily_strength,
            "metric_marginal": self.metric_marginal.kind.value,
            "beta_a": self.metric_marginal.a,
            "beta_b": self.metric_marginal.b,
            "seed": self.seed,
            "start": self.start,
            "buffer_days": self.buffer_days,
            "duration_days": self.duration_days,
        }
        flat.update(asdict(self.intensity))
        return flat

    @classmethod
    def from_flat(cls, values: Dict[str, Any]) -> "SynthConfig":
        known = set(cls().to_flat())
        unknown = sorted(set(values) - known)
        if unknown:
            raise UsageError(f"unknown synth config keys: {', '.join(unknown)}")

        def get(key: str, cast, default):
            raw = values.get(key)
            if raw is None or raw == "":
                return default
            try:
                return cast(raw)
            except (TypeError, ValueError) as e:
                raise UsageError(f"synth config {key}={raw!r} is not valid: {e}") from e

        defaults = cls()
        dd, mm, ii = defaults.degree_dist, defaults.metric_marginal, defaults.intensity
        try:
            degree = DegreeDistribution(
                kind=DegreeKind(get("degree_dist", str, dd.kind.value)),
                gamma=get("gamma", float, dd.gamma),
                k_min=get("k_min", int, dd.k_min),
                k_max=get("k_max", int, dd.k_max),
                k=get("k", int, dd.k),
                lam=get("lam", float, dd.lam),
            )
            marginal = Marginal(
                kind=MarginalKind(get("metric_marginal", str, mm.kind.value)),
                a=get("beta_a", float, mm.a),
                b=get("beta_b", float, mm.b),
            )
        except ValueError as e:
            raise UsageError(f"invalid synth config: {e}") from e
        intensity = IntensityParams(
            posts_scale=get("posts_scale", float, ii.posts_scale),
            exposures_per_node=get("exposures_per_node", int, ii.exposures_per_node),
            max_delay=get("max_delay", int, ii.max_delay),
            min_shares=get("min_shares", int, ii.min_shares),
            max_spontaneous=get("max_spontaneous", int, ii.max_spontaneous),
        )
        return cls(
            n_nodes=get("n_nodes", int, defaults.n_nodes),
            degree_dist=degree,
            rho_ks_target=get("rho_ks_target", float, defaults.rho_ks_target),
            sar_rho_ks_target=get("sar_rho_ks_target", float, None),
            homophily_strength=get("homophily_strength", float, defaults.homophily_strength),
            metric_marginal=marginal,
            seed=get("seed", int, defaults.seed),
            intensity=intensity,
            start=get("start", int, defaults.start),
            buffer_days=get("buffer_days", int, defaults.buffer_days),
            duration_days=get("duration_days", int, defaults.duration_days),
        )


def load_synth_config(path: Union[str, Path], seed: Optional[int] = None) -> SynthConfig:
    """Read a JSON object or a key=value file; `seed` overrides the file's seed."""
    path = Path(path)
    if not path.exists():
        raise UsageError(f"synth config not found: {path}")
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            values = json.loads(text)
        except json.JSONDecodeError as e:
            raise UsageError(f"{path}: invalid JSON: {e}") from e
        if not isinstance(values, dict):
            raise UsageError(f"{path}: expected a JSON object")
    else:
        values = dict(dotenv_values(path))
    if seed is not None:
        values["seed"] = seed
    return SynthConfig.from_flat(values)
