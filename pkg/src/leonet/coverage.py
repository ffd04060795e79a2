"""Time-averaged coverage density (visible satellite count) versus latitude."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constellation import EARTH_RADIUS_KM, Constellation, ShellSpec
from .geometry import coverage_half_angle, latlon_to_ecef

COMBINED = "all"


@dataclass(frozen=True, eq=False)
class CoverageProfile:
    lat_edges: np.ndarray  # (B+1,) degrees
    shell_names: tuple[str, ...]
    per_shell: np.ndarray  # (S, B) mean visible count
    per_shell_stderr: np.ndarray  # (S, B) standard error of the mean
    threshold: float
    samples_per_bin: int

    @property
    def lat_centers(self) -> np.ndarray:
        return 0.5 * (self.lat_edges[:-1] + self.lat_edges[1:])

    @property
    def combined(self) -> np.ndarray:
        return self.per_shell.sum(axis=0)

    def rows(self):
        """``(lat_deg, shell, mean_visible)`` tuples, per shell then the combined pseudo-shell."""
        for lat_i, lat in enumerate(self.lat_centers):
            for k, name in enumerate(self.shell_names):
                yield float(lat), name, float(self.per_shell[k, lat_i])
            yield float(lat), COMBINED, float(self.combined[lat_i])


def default_lat_edges(width_deg: float = 1.0) -> np.ndarray:
    return np.linspace(-90.0, 90.0, int(round(180.0 / width_deg)) + 1)


def coverage_density(
    shells: Constellation | Sequence[ShellSpec],
    lat_edges: np.ndarray,
    lon_samples: int,
    times: Sequence[float],
    threshold: float = 25.0,
    chunk: int = 2048,
) -> CoverageProfile:
    """Mean number of satellites at or above ``threshold`` elevation per latitude bin.

    Ground samples sit at the bin centres, at ``lon_samples`` evenly spaced
    longitudes, altitude 0, and at each of ``times``. For a ground point on the
    sphere and a satellite of altitude h, elevation >= e is the same condition
    as an Earth central angle <= psi(h, e), which is what gets tested.
    """
    lat_edges = np.asarray(lat_edges, dtype=float)
    if lat_edges.ndim != 1 or lat_edges.size < 2 or np.any(np.diff(lat_edges) <= 0):
        raise ValueError("lat_edges must be strictly increasing with at least two entries")
    if lon_samples < 1 or len(times) < 1:
        raise ValueError("need at least one longitude and one time sample")
    if not 0.0 <= threshold < 90.0:
        raise ValueError(f"threshold {threshold} outside [0, 90)")

    if isinstance(shells, Constellation):
        constellation = shells
    elif len(shells):
        constellation = Constellation(shells)
    else:
        constellation = None

    centers = 0.5 * (lat_edges[:-1] + lat_edges[1:])
    lons = np.arange(lon_samples) * (360.0 / lon_samples) - 180.0
    lat_g, lon_g = np.meshgrid(centers, lons, indexing="ij")
    ground_unit = latlon_to_ecef(lat_g.ravel(), lon_g.ravel(), 0.0) / EARTH_RADIUS_KM  # (B*L, 3)
    B = centers.size
    n_samples = len(times) * lon_samples

    if constellation is None:
        z = np.zeros((0, B))
        return CoverageProfile(lat_edges, (), z, z.copy(), float(threshold), n_samples)

    S = len(constellation.shells)
    counts = np.zeros((S, len(times), B * lon_samples))
    cos_psi = [math.cos(math.radians(coverage_half_angle(s.altitude_km, threshold))) for s in constellation.shells]
    for ti, t in enumerate(times):
        pos = constellation.positions_ecef(float(t))
        for k in range(S):
            rng = constellation.shell_range(k)
            sat = pos[rng.start : rng.stop]
            sat_unit = sat / np.linalg.norm(sat, axis=1, keepdims=True)
            for lo in range(0, ground_unit.shape[0], chunk):
                dots = ground_unit[lo : lo + chunk] @ sat_unit.T
                counts[k, ti, lo : lo + chunk] = (dots >= cos_psi[k]).sum(axis=1)

    per_point = counts.reshape(S, len(times), B, lon_samples).transpose(0, 2, 1, 3).reshape(S, B, n_samples)
    mean = per_point.mean(axis=2)
    if n_samples > 1:
        stderr = per_point.std(axis=2, ddof=1) / math.sqrt(n_samples)
    else:
        stderr = np.zeros_like(mean)
    return CoverageProfile(
        lat_edges, tuple(s.name for s in constellation.shells), mean, stderr, float(threshold), n_samples
    )
