"""Experiment orchestration: baseline time series, dropout sweeps, coverage.

The timeline (propagation + feeder-link update) is advanced strictly in order,
one ``step`` at a time, because feeder links carry state between steps.
Metric evaluation on each snapshot is independent and may use several
threads.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .config import SimulationConfig
from .constellation import Constellation
from .coverage import CoverageProfile, coverage_density, default_lat_edges
from .errors import DataError, InvariantError
from .ground import DropoutSchedule, GroundStation, active_mask, load_stations_file, sample_catalog
from .links import FeederPolicy, IslConfig, TopologySnapshot, assign_feeder_links, build_isls, compose_snapshot
from .metrics import MetricsReport, compute_metrics, diameter_apl
from .report import edge_rows

log = logging.getLogger(__name__)

# Published single-shell hop diameter / APL, by shell name.
REFERENCE_SHELL_FIGURES = {
    "S1": (72, 36.58),
    "S2": (72, 36.58),
    "S3": (36, 18.94),
    "S4": (32, 16.09),
    "S5": (58, 33.36),
    "S6": (58, 33.36),
}


def load_catalog(config: SimulationConfig) -> list[GroundStation]:
    if config.stations is None:
        return []
    path = config.stations_path()
    if path is None:
        return sample_catalog()
    try:
        return load_stations_file(path)
    except OSError as exc:
        raise DataError(f"cannot read station catalog {path}: {exc.strerror or exc}") from None
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from None


class Timeline:
    """Stateful walk along simulation time carrying feeder links from step to step."""

    def __init__(
        self,
        constellation: Constellation,
        isl_edges: np.ndarray,
        catalog: Sequence[GroundStation],
        policy: FeederPolicy,
        step: float,
        dropout: DropoutSchedule | None = None,
    ):
        self.constellation = constellation
        self.isl_edges = isl_edges
        self.catalog = list(catalog)
        self.policy = policy
        self.step = float(step)
        self.dropout = dropout
        self._catalog_pos = np.array([gs.ecef for gs in self.catalog]).reshape(-1, 3)
        self.time: float | None = None
        self.fl_edges = np.zeros((0, 2), dtype=np.int64)
        self._active_idx = np.arange(len(self.catalog))
        self._sat_pos: np.ndarray | None = None

    def _active_indices(self, t: float) -> np.ndarray:
        if self.dropout is None or self.dropout.probability == 0.0:
            return np.arange(len(self.catalog))
        return np.flatnonzero(active_mask(len(self.catalog), self.dropout, t))

    def _update(self, t: float) -> None:
        idx = self._active_indices(t)
        stations = [self.catalog[i] for i in idx]
        pos = self.constellation.positions_ecef(t)
        rng = np.random.default_rng([self.policy.seed, int(round(t * 1000))])
        self.fl_edges = assign_feeder_links(
            pos, stations, self.policy, previous=map(tuple, self.fl_edges), rng=rng,
            station_positions=self._catalog_pos[idx],
        )  # fmt: skip
        self._active_idx = idx
        self._sat_pos = pos
        self.time = t

    def advance(self, t: float) -> None:
        """Move to time ``t``, updating feeder links at every step boundary on the way."""
        if self.time is not None and t < self.time:
            raise ValueError(f"cannot move the timeline backwards ({self.time} -> {t})")
        k = 0 if self.time is None else int(math.floor(self.time / self.step + 1e-9)) + 1
        while k * self.step < t - 1e-9:
            self._update(k * self.step)
            k += 1
        if self.time is None or abs(self.time - t) > 1e-9:
            self._update(t)

    @property
    def active_stations(self) -> list[GroundStation]:
        return [self.catalog[i] for i in self._active_idx]

    def snapshot(self) -> TopologySnapshot:
        if self.time is None:
            raise RuntimeError("timeline has not been advanced")
        return compose_snapshot(
            self.time, self.constellation, self.isl_edges, self.fl_edges,
            self.active_stations, self.policy, sat_positions=self._sat_pos,
        )  # fmt: skip


@dataclass
class Scenario:
    """Constellation, ISLs and catalog built once from a config."""

    config: SimulationConfig
    constellation: Constellation
    isl_edges: np.ndarray
    catalog: list[GroundStation]

    @classmethod
    def from_config(cls, config: SimulationConfig) -> "Scenario":
        constellation = Constellation(config.shells)
        return cls(config, constellation, build_isls(constellation, config.isl), load_catalog(config))

    def timeline(self, seed: int, dropout: DropoutSchedule | None = None) -> Timeline:
        return Timeline(
            self.constellation, self.isl_edges, self.catalog, self.config.feeder_policy(seed),
            self.config.step, dropout,
        )  # fmt: skip


def baseline_ticks(config: SimulationConfig) -> list[float]:
    """Metric times: multiples of the metric interval after warmup, up to the duration."""
    k0 = int(math.floor(config.warmup / config.metric_interval + 1e-9)) + 1
    ticks = []
    k = k0
    while k * config.metric_interval <= config.duration + 1e-9:
        ticks.append(k * config.metric_interval)
        k += 1
    return ticks


def _evaluate(timeline: Timeline, config: SimulationConfig, threads: int | None) -> tuple[MetricsReport, TopologySnapshot]:
    try:
        snap = timeline.snapshot()
        report = compute_metrics(snap, weighting=config.path_weighting, threads=threads)
    except InvariantError as exc:
        # keep the offending topology for post-mortem
        exc.dump_rows = list(edge_rows(timeline.time, timeline.isl_edges, timeline.fl_edges))
        raise
    return report, snap


def iter_baseline(
    config: SimulationConfig, threads: int | None = None, scenario: Scenario | None = None
) -> Iterator[tuple[MetricsReport, TopologySnapshot]]:
    scenario = scenario or Scenario.from_config(config)
    tl = scenario.timeline(config.seed)
    for t in baseline_ticks(config):
        tl.advance(t)
        yield _evaluate(tl, config, threads)


def run_baseline(config: SimulationConfig, threads: int | None = None) -> list[MetricsReport]:
    return [r for r, _ in iter_baseline(config, threads)]


@dataclass(frozen=True)
class RobustnessRow:
    probability: float
    window: int
    seed: int
    report: MetricsReport


def robustness_windows(config: SimulationConfig) -> list[float]:
    """Evaluation time of each dropout window: the window midpoint."""
    n = int(math.floor(config.robustness_duration / config.dropout_interval + 1e-9))
    return [(w + 0.5) * config.dropout_interval for w in range(n)]


def iter_robustness(
    config: SimulationConfig,
    threads: int | None = None,
    scenario: Scenario | None = None,
    probabilities: Sequence[float] | None = None,
) -> Iterator[tuple[RobustnessRow, TopologySnapshot]]:
    """Dropout sweep. Windows are numbered seed-major when several seeds are configured."""
    scenario = scenario or Scenario.from_config(config)
    times = robustness_windows(config)
    for p in config.dropout_sweep if probabilities is None else probabilities:
        for si, seed in enumerate(config.seeds):
            schedule = DropoutSchedule(p, config.dropout_interval, seed)
            tl = scenario.timeline(seed, schedule)
            for w, t in enumerate(times):
                tl.advance(t)
                report, snap = _evaluate(tl, config, threads)
                yield RobustnessRow(p, si * len(times) + w, seed, report), snap
            log.info("dropout p=%s seed=%s done", p, seed)


def run_robustness(config: SimulationConfig, threads: int | None = None) -> list[RobustnessRow]:
    return [row for row, _ in iter_robustness(config, threads)]


def summarize_robustness(rows: Sequence[RobustnessRow]) -> dict[float, dict[str, float | None]]:
    """Across-window means per dropout probability (absent values skipped)."""
    out: dict[float, dict[str, float | None]] = {}
    for p in sorted({r.probability for r in rows}):
        sel = [r.report.row() for r in rows if r.probability == p]
        means: dict[str, float | None] = {}
        for key in sel[0]:
            if key == "t":
                continue
            vals = [v for v in (s[key] for s in sel) if v is not None]
            means[key] = float(np.mean(vals)) if vals else None
        out[p] = means
    return out


def snapshot_at(
    config: SimulationConfig, t: float, threads: int | None = None
) -> tuple[MetricsReport, TopologySnapshot]:
    if not 0 <= t <= config.duration:
        raise ValueError(f"t={t} outside [0, duration={config.duration}]")
    scenario = Scenario.from_config(config)
    tl = scenario.timeline(config.seed)
    tl.advance(t)
    return _evaluate(tl, config, threads)


def coverage_times(config: SimulationConfig) -> np.ndarray:
    span = config.coverage.time_span
    if span is None:
        span = max(s.period_s for s in config.shells)
    return np.arange(config.coverage.time_samples) * (span / config.coverage.time_samples)


def run_coverage(config: SimulationConfig) -> CoverageProfile:
    cov = config.coverage
    return coverage_density(
        Constellation(config.shells),
        default_lat_edges(cov.lat_bin_deg),
        cov.lon_samples,
        coverage_times(config),
        cov.threshold,
    )


@dataclass(frozen=True)
class ShellComparison:
    shell: str
    style: str
    seam: str
    diameter: float
    apl: float
    reference_diameter: float | None
    reference_apl: float | None

    @property
    def note(self) -> str:
        if self.reference_diameter is None:
            return "no reference"
        ok_d = self.diameter == self.reference_diameter
        ok_a = abs(self.apl - self.reference_apl) <= 0.1
        if ok_d and ok_a:
            return "match"
        parts = []
        if not ok_d:
            parts.append(f"diameter {self.diameter:g} vs {self.reference_diameter:g}")
        if not ok_a:
            parts.append(f"apl {self.apl:.2f} vs {self.reference_apl:.2f}")
        return "mismatch: " + "; ".join(parts)


def single_shell_comparison(config: SimulationConfig, threads: int | None = None) -> list[ShellComparison]:
    """Exact diameter/APL of each configured shell alone, for every ISL style and seam mode."""
    out = []
    for spec in config.shells:
        c = Constellation([spec])
        ref = REFERENCE_SHELL_FIGURES.get(spec.name)
        for style in ("grid4", "tri3"):
            for seam in ("wrap", "cut"):
                isl = build_isls(c, IslConfig(style, seam))
                snap = compose_snapshot(0.0, c, isl, np.zeros((0, 2), dtype=np.int64))
                d, a = diameter_apl(snap, threads=threads)
                out.append(ShellComparison(spec.name, style, seam, d, a, *(ref if ref else (None, None))))
    return out

