"""JSON simulation configuration.

Every object in the document is checked against the known field names and
unknown keys are rejected, so a typo fails loudly instead of silently falling
back to a default.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from .constellation import STARLINK_SHELLS, ShellSpec
from .errors import ConfigurationError
from .links import FeederPolicy, IslConfig

SAMPLE_STATIONS = "sample"

DEFAULT_DROPOUT_SWEEP = (0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.96, 0.97, 0.98, 0.99)


@dataclass(frozen=True)
class CoverageSettings:
    lat_bin_deg: float = 1.0
    lon_samples: int = 36
    time_samples: int = 20
    time_span: float | None = None  # seconds; None = longest shell period
    threshold: float = 25.0

    def __post_init__(self) -> None:
        if not self.lat_bin_deg > 0 or abs(180.0 / self.lat_bin_deg - round(180.0 / self.lat_bin_deg)) > 1e-9:
            raise ConfigurationError(f"coverage.lat_bin_deg must divide 180, got {self.lat_bin_deg}")
        if self.lon_samples < 1 or self.time_samples < 1:
            raise ConfigurationError("coverage.lon_samples and coverage.time_samples must be >= 1")
        if self.time_span is not None and not self.time_span > 0:
            raise ConfigurationError("coverage.time_span must be > 0")
        if not 0.0 <= self.threshold < 90.0:
            raise ConfigurationError(f"coverage.threshold must be in [0, 90), got {self.threshold}")


@dataclass(frozen=True)
class SimulationConfig:
    shells: tuple[ShellSpec, ...] = STARLINK_SHELLS
    isl: IslConfig = IslConfig()
    feeder: FeederPolicy = FeederPolicy()
    stations: str | None = SAMPLE_STATIONS
    duration: float = 10_000.0
    step: float = 10.0
    warmup: float = 500.0
    metric_interval: float = 500.0
    dropout_sweep: tuple[float, ...] = DEFAULT_DROPOUT_SWEEP
    dropout_interval: float = 1000.0
    robustness_duration: float = 11_000.0
    seeds: tuple[int, ...] = (0,)
    path_weighting: str = "hops"
    output_dir: str = "out"
    coverage: CoverageSettings = CoverageSettings()
    base_dir: Path = field(default=Path("."), compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.shells:
            raise ConfigurationError("at least one shell is required")
        names = [s.name for s in self.shells]
        if len(set(names)) != len(names):
            raise ConfigurationError("duplicate shell names")
        if not self.step > 0:
            raise ConfigurationError(f"step must be > 0, got {self.step}")
        if not self.duration >= self.warmup >= 0:
            raise ConfigurationError(f"need duration >= warmup >= 0, got {self.duration} and {self.warmup}")
        if not self.metric_interval > 0:
            raise ConfigurationError("metric_interval must be > 0")
        ratio = self.metric_interval / self.step
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ConfigurationError(f"metric_interval {self.metric_interval} is not a multiple of step {self.step}")
        if not self.dropout_interval > 0 or not self.robustness_duration > 0:
            raise ConfigurationError("dropout_interval and robustness_duration must be > 0")
        for p in self.dropout_sweep:
            if not 0.0 <= p <= 1.0:
                raise ConfigurationError(f"dropout probability {p} outside [0, 1]")
        if not self.seeds:
            raise ConfigurationError("seeds must list at least one seed")
        if any(s < 0 for s in self.seeds):
            raise ConfigurationError("seeds must be non-negative")
        if self.path_weighting not in ("hops", "distance"):
            raise ConfigurationError(f"path_weighting must be 'hops' or 'distance', got {self.path_weighting!r}")

    @property
    def seed(self) -> int:
        return self.seeds[0]

    def with_seed(self, seed: int) -> "SimulationConfig":
        return replace(self, seeds=(seed,))

    def feeder_policy(self, seed: int | None = None) -> FeederPolicy:
        return replace(self.feeder, seed=self.seed if seed is None else seed)

    def stations_path(self) -> Path | None:
        if self.stations is None or self.stations == SAMPLE_STATIONS:
            return None
        p = Path(self.stations)
        return p if p.is_absolute() else self.base_dir / p

    def output_path(self) -> Path:
        p = Path(self.output_dir)
        return p if p.is_absolute() else self.base_dir / p

    def to_dict(self) -> dict[str, Any]:
        return {
            "shells": [
                {
                    "name": s.name,
                    "altitude_km": s.altitude_km,
                    "inclination_deg": s.inclination_deg,
                    "num_planes": s.num_planes,
                    "sats_per_plane": s.sats_per_plane,
                    "phasing_factor": s.phasing_factor,
                }
                for s in self.shells
            ],
            "isl": {"style": self.isl.style, "seam": self.isl.seam},
            "feeder": {
                "kind": self.feeder.kind,
                "gs_threshold": self.feeder.gs_threshold,
                "random_threshold": self.feeder.random_threshold,
                "sat_capacity": self.feeder.sat_capacity,
            },
            "stations": self.stations,
            "duration": self.duration,
            "step": self.step,
            "warmup": self.warmup,
            "metric_interval": self.metric_interval,
            "dropout_sweep": list(self.dropout_sweep),
            "dropout_interval": self.dropout_interval,
            "robustness_duration": self.robustness_duration,
            "seeds": list(self.seeds),
            "path_weighting": self.path_weighting,
            "output_dir": self.output_dir,
            "coverage": {f.name: getattr(self.coverage, f.name) for f in fields(CoverageSettings)},
        }


_SHELL_KEYS = {"name", "altitude_km", "inclination_deg", "num_planes", "sats_per_plane", "phasing_factor"}
_FEEDER_KEYS = {"kind", "gs_threshold", "random_threshold", "sat_capacity"}
_TOP_KEYS = {
    "shells", "isl", "feeder", "stations", "duration", "step", "warmup", "metric_interval",
    "dropout_sweep", "dropout_interval", "robustness_duration", "seeds", "path_weighting",
    "output_dir", "coverage",
}  # fmt: skip


def _check_keys(obj: Any, allowed: set[str], where: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigurationError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigurationError(f"{where}: unknown key(s) {', '.join(unknown)}")
    return obj


def _number(v: Any, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigurationError(f"{where}: expected a number, got {v!r}")
    return float(v)


def _integer(v: Any, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigurationError(f"{where}: expected an integer, got {v!r}")
    return v


def config_from_dict(doc: dict, base_dir: Path | str = ".") -> SimulationConfig:
    doc = _check_keys(doc, _TOP_KEYS, "config")
    kw: dict[str, Any] = {"base_dir": Path(base_dir)}
    if "shells" in doc:
        shells = doc["shells"]
        if shells == "starlink":
            kw["shells"] = STARLINK_SHELLS
        else:
            if not isinstance(shells, list):
                raise ConfigurationError("shells: expected a list or the string 'starlink'")
            out = []
            for i, s in enumerate(shells):
                where = f"shells[{i}]"
                _check_keys(s, _SHELL_KEYS, where)
                missing = sorted(_SHELL_KEYS - {"phasing_factor"} - set(s))
                if missing:
                    raise ConfigurationError(f"{where}: missing key(s) {', '.join(missing)}")
                out.append(
                    ShellSpec(
                        name=str(s["name"]),
                        altitude_km=_number(s["altitude_km"], f"{where}.altitude_km"),
                        inclination_deg=_number(s["inclination_deg"], f"{where}.inclination_deg"),
                        num_planes=_integer(s["num_planes"], f"{where}.num_planes"),
                        sats_per_plane=_integer(s["sats_per_plane"], f"{where}.sats_per_plane"),
                        phasing_factor=_integer(s.get("phasing_factor", 1), f"{where}.phasing_factor"),
                    )
                )
            kw["shells"] = tuple(out)
    if "isl" in doc:
        isl = _check_keys(doc["isl"], {"style", "seam"}, "isl")
        kw["isl"] = IslConfig(**isl)
    if "feeder" in doc:
        f = dict(_check_keys(doc["feeder"], _FEEDER_KEYS, "feeder"))
        for k in ("gs_threshold", "random_threshold"):
            if k in f:
                f[k] = _number(f[k], f"feeder.{k}")
        if "sat_capacity" in f:
            f["sat_capacity"] = _integer(f["sat_capacity"], "feeder.sat_capacity")
        kw["feeder"] = FeederPolicy(**f)
    if "stations" in doc:
        if doc["stations"] is not None and not isinstance(doc["stations"], str):
            raise ConfigurationError("stations: expected a path, 'sample' or null")
        kw["stations"] = doc["stations"]
    for k in ("duration", "step", "warmup", "metric_interval", "dropout_interval", "robustness_duration"):
        if k in doc:
            kw[k] = _number(doc[k], k)
    if "dropout_sweep" in doc:
        if not isinstance(doc["dropout_sweep"], list):
            raise ConfigurationError("dropout_sweep: expected a list")
        kw["dropout_sweep"] = tuple(_number(p, "dropout_sweep[]") for p in doc["dropout_sweep"])
    if "seeds" in doc:
        if not isinstance(doc["seeds"], list):
            raise ConfigurationError("seeds: expected a list of integers")
        kw["seeds"] = tuple(_integer(s, "seeds[]") for s in doc["seeds"])
    for k in ("path_weighting", "output_dir"):
        if k in doc:
            kw[k] = str(doc[k])
    if "coverage" in doc:
        cov = _check_keys(doc["coverage"], {f.name for f in fields(CoverageSettings)}, "coverage")
        kw["coverage"] = CoverageSettings(**cov)
    try:
        return SimulationConfig(**kw)
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from None


def load_config(path: Path | str) -> SimulationConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc.strerror or exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return config_from_dict(doc, base_dir=path.parent)
