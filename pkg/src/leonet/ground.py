"""Gateway-station catalog and seeded station dropout."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, TextIO

import numpy as np

from .errors import ConfigurationError, DataError
from .geometry import GeodeticPoint, geodetic_to_ecef

CATALOG_COLUMNS = ("id", "name", "lat_deg", "lon_deg", "alt_m", "max_links")
DEFAULT_MAX_LINKS = 8
SAMPLE_CATALOG = "gateways_sample.csv"


@dataclass(frozen=True)
class GroundStation:
    id: int
    name: str
    location: GeodeticPoint
    max_links: int = DEFAULT_MAX_LINKS

    def __post_init__(self) -> None:
        if self.max_links < 1:
            raise DataError(f"station {self.id}: max_links must be >= 1, got {self.max_links}")

    @property
    def ecef(self) -> np.ndarray:
        return geodetic_to_ecef(self.location)


@dataclass(frozen=True)
class DropoutSchedule:
    probability: float = 0.0
    resample_interval: float = 1000.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.probability <= 1.0:
            raise ConfigurationError(f"dropout probability must be in [0, 1], got {self.probability}")
        if not self.resample_interval > 0:
            raise ConfigurationError(f"resample_interval must be > 0, got {self.resample_interval}")
        if self.seed < 0:
            raise ConfigurationError(f"seed must be non-negative, got {self.seed}")

    def window(self, t: float) -> int:
        return int(math.floor(t / self.resample_interval))


def _parse_float(value: str, column: str, line: int) -> float:
    try:
        x = float(value)
    except ValueError:
        raise DataError(f"line {line}: column {column!r} is not a number: {value!r}") from None
    if not math.isfinite(x):
        raise DataError(f"line {line}: column {column!r} is not finite: {value!r}")
    return x


def load_stations(source: TextIO | str) -> list[GroundStation]:
    """Parse a station catalog in ``id,name,lat_deg,lon_deg,alt_m,max_links`` CSV format.

    ``source`` is an open text stream or the CSV text itself. The ``id``,
    ``alt_m`` and ``max_links`` columns may be omitted or left blank; blank ids
    are numbered by row position.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise DataError("line 1: station catalog is empty (header row required)") from None
    unknown = [h for h in header if h not in CATALOG_COLUMNS]
    if unknown:
        raise DataError(f"line 1: unknown catalog column(s): {', '.join(unknown)}")
    for required in ("name", "lat_deg", "lon_deg"):
        if required not in header:
            raise DataError(f"line 1: missing required column {required!r}")
    col = {h: i for i, h in enumerate(header)}

    stations: list[GroundStation] = []
    seen: dict[int, int] = {}
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise DataError(f"line {line}: expected {len(header)} fields, got {len(row)}")

        def get(name: str) -> str:
            return row[col[name]].strip() if name in col else ""

        raw_id = get("id")
        if raw_id:
            try:
                sid = int(raw_id)
            except ValueError:
                raise DataError(f"line {line}: id is not an integer: {raw_id!r}") from None
        else:
            sid = len(stations)
        if sid in seen:
            raise DataError(f"line {line}: duplicate station id {sid} (first seen on line {seen[sid]})")
        seen[sid] = line

        lat = _parse_float(get("lat_deg"), "lat_deg", line)
        lon = _parse_float(get("lon_deg"), "lon_deg", line)
        if not -90.0 <= lat <= 90.0:
            raise DataError(f"line {line}: lat_deg {lat} outside [-90, 90]")
        if not -180.0 <= lon < 180.0:
            raise DataError(f"line {line}: lon_deg {lon} outside [-180, 180)")
        alt = _parse_float(get("alt_m"), "alt_m", line) if get("alt_m") else 0.0
        raw_links = get("max_links")
        if raw_links:
            try:
                max_links = int(raw_links)
            except ValueError:
                raise DataError(f"line {line}: max_links is not an integer: {raw_links!r}") from None
        else:
            max_links = DEFAULT_MAX_LINKS
        if max_links < 1:
            raise DataError(f"line {line}: max_links must be >= 1, got {max_links}")
        stations.append(GroundStation(sid, get("name"), GeodeticPoint(lat, lon, alt), max_links))
    return stations


def load_stations_file(path) -> list[GroundStation]:
    with open(path, newline="", encoding="utf-8") as fh:
        return load_stations(fh)


def sample_catalog() -> list[GroundStation]:
    """The bundled synthetic 198-station catalog (not real gateway coordinates)."""
    text = resources.files("leonet.data").joinpath(SAMPLE_CATALOG).read_text(encoding="utf-8")
    return load_stations(text)


def active_mask(n: int, schedule: DropoutSchedule, t: float) -> np.ndarray:
    """Boolean keep-mask over ``n`` catalog positions for the dropout window containing ``t``.

    Each window draws one uniform per station from a generator seeded with
    ``(seed, window)``; a station is dropped when its draw is below the
    probability. Different probabilities with the same seed therefore give
    nested active sets.
    """
    rng = np.random.default_rng([schedule.seed, schedule.window(t)])
    return rng.random(n) >= schedule.probability


def active_set(catalog: Iterable[GroundStation], schedule: DropoutSchedule, t: float) -> list[GroundStation]:
    catalog = list(catalog)
    keep = active_mask(len(catalog), schedule, t)
    return [gs for gs, k in zip(catalog, keep) if k]
