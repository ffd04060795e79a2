"""Frames, spherical-Earth geodesy and ground-to-satellite visibility."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constellation import EARTH_RADIUS_KM
from .errors import UndefinedGeometryError

EARTH_ROTATION_RATE = 7.2921159e-5  # rad / s


@dataclass(frozen=True)
class GeodeticPoint:
    latitude: float  # deg
    longitude: float  # deg, [-180, 180)
    altitude: float = 0.0  # m above mean Earth radius

    def __post_init__(self) -> None:
        if not -90.0 <= self.latitude <= 90.0:
            raise ValueError(f"latitude {self.latitude} outside [-90, 90]")
        if not -180.0 <= self.longitude < 180.0:
            raise ValueError(f"longitude {self.longitude} outside [-180, 180)")


def eci_to_ecef(r, t: float) -> np.ndarray:
    """Rotate inertial vector(s) ``r`` (..., 3) into the Earth-fixed frame at time ``t``."""
    r = np.asarray(r, dtype=float)
    theta = EARTH_ROTATION_RATE * t
    c, s = math.cos(theta), math.sin(theta)
    out = np.empty_like(r)
    out[..., 0] = c * r[..., 0] + s * r[..., 1]
    out[..., 1] = -s * r[..., 0] + c * r[..., 1]
    out[..., 2] = r[..., 2]
    return out


def geodetic_to_ecef(p: GeodeticPoint) -> np.ndarray:
    return latlon_to_ecef(p.latitude, p.longitude, p.altitude / 1000.0)


def latlon_to_ecef(lat_deg, lon_deg, alt_km=0.0) -> np.ndarray:
    """Vectorised spherical conversion; broadcasts its arguments, returns (..., 3) km."""
    lat = np.radians(lat_deg)
    lon = np.radians(lon_deg)
    r = EARTH_RADIUS_KM + np.asarray(alt_km, dtype=float)
    cl = np.cos(lat)
    return np.stack(np.broadcast_arrays(r * cl * np.cos(lon), r * cl * np.sin(lon), r * np.sin(lat)), axis=-1)


def elevation_angle(gs, sat) -> float:
    """Elevation of ``sat`` above the local horizontal plane at ``gs``, degrees."""
    gs = np.asarray(gs, dtype=float)
    sat = np.asarray(sat, dtype=float)
    d = sat - gs
    dist = float(np.linalg.norm(d))
    if dist == 0.0:
        raise UndefinedGeometryError("elevation undefined: satellite coincides with the ground point")
    up = gs / np.linalg.norm(gs)
    x = float(np.dot(d, up)) / dist
    return math.degrees(math.asin(min(1.0, max(-1.0, x))))


def visible(gs, sat, threshold: float) -> bool:
    if not 0.0 <= threshold < 90.0:
        raise ValueError(f"threshold {threshold} outside [0, 90)")
    return elevation_angle(gs, sat) >= threshold


def slant_range(gs, sat) -> float:
    return float(np.linalg.norm(np.asarray(sat, dtype=float) - np.asarray(gs, dtype=float)))


def elevation_matrix(ground: np.ndarray, sats: np.ndarray) -> np.ndarray:
    """Elevation in degrees of every satellite from every ground point, shape (G, N).

    Same formula as :func:`elevation_angle`, evaluated with two matrix products.
    """
    ground = np.asarray(ground, dtype=float).reshape(-1, 3)
    sats = np.asarray(sats, dtype=float).reshape(-1, 3)
    g_norm = np.linalg.norm(ground, axis=1)
    up = ground / g_norm[:, None]
    proj = up @ sats.T - g_norm[:, None]  # d . up
    d2 = (sats * sats).sum(axis=1)[None, :] + (g_norm**2)[:, None] - 2.0 * (ground @ sats.T)
    np.maximum(d2, 0.0, out=d2)
    with np.errstate(divide="ignore", invalid="ignore"):
        x = proj / np.sqrt(d2)
    np.clip(x, -1.0, 1.0, out=x)
    return np.degrees(np.arcsin(x))


def pair_elevations(ground: np.ndarray, sats: np.ndarray) -> np.ndarray:
    """Elevation (deg) of ``sats[k]`` seen from ``ground[k]``, row by row."""
    d = sats - ground
    up = ground / np.linalg.norm(ground, axis=1, keepdims=True)
    x = (d * up).sum(axis=1) / np.linalg.norm(d, axis=1)
    return np.degrees(np.arcsin(np.clip(x, -1.0, 1.0)))


def visible_pairs(ground: np.ndarray, sats: np.ndarray, threshold: float):
    """All (ground row, satellite index) pairs with elevation >= ``threshold``.

    Returns ``(rows, cols, elevation_deg)`` in row-major order. A cheap
    central-angle bound discards pairs that cannot reach the threshold before
    the exact elevation is evaluated on the survivors.
    """
    ground = np.asarray(ground, dtype=float).reshape(-1, 3)
    sats = np.asarray(sats, dtype=float).reshape(-1, 3)
    empty = (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0))
    if ground.size == 0 or sats.size == 0:
        return empty
    g_norm = np.linalg.norm(ground, axis=1)
    s_norm = np.linalg.norm(sats, axis=1)
    rho = g_norm.min() * math.cos(math.radians(threshold)) / s_norm.max()
    if rho < 1.0:
        psi = math.acos(rho) - math.radians(threshold)
        dots = (ground / g_norm[:, None]) @ (sats / s_norm[:, None]).T
        rows, cols = np.nonzero(dots >= math.cos(min(math.pi, psi + 1e-6)))
    else:
        rows, cols = np.nonzero(np.ones((len(ground), len(sats)), dtype=bool))
    if rows.size == 0:
        return empty
    el = pair_elevations(ground[rows], sats[cols])
    keep = el >= threshold
    return rows[keep], cols[keep], el[keep]


def coverage_half_angle(altitude_km: float, elevation_deg: float) -> float:
    """Earth central angle (deg) between a ground point and a satellite seen at ``elevation_deg``."""
    e = math.radians(elevation_deg)
    rho = EARTH_RADIUS_KM * math.cos(e) / (EARTH_RADIUS_KM + altitude_km)
    return math.degrees(math.acos(rho) - e)
