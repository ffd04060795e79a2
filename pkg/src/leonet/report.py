"""CSV writers for every report the driver emits.

All files are UTF-8 with a header row, ``\\n`` line endings and a fixed column
order. Floats are written with ``repr`` so identical runs give identical bytes.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .constellation import Constellation
from .coverage import CoverageProfile
from .links import TopologySnapshot
from .metrics import METRIC_COLUMNS, MetricsReport, format_value

BETWEENNESS_COLUMNS = ("t", "node_kind", "node_id", "bc")
ROBUSTNESS_COLUMNS = ("dropout_p", "window") + METRIC_COLUMNS
COVERAGE_COLUMNS = ("lat_deg", "shell", "mean_visible")
EDGE_COLUMNS = ("t", "src_kind", "src_id", "dst_kind", "dst_id", "kind")
SATELLITE_COLUMNS = ("index", "shell", "plane", "slot", "altitude_km", "inclination_deg", "raan_deg", "phase_deg")
SHELL_COMPARISON_COLUMNS = ("shell", "isl_style", "seam", "diameter", "apl", "reference_diameter", "reference_apl", "note")


class CsvSink:
    """Append-as-you-go CSV file, so a run aborted midway keeps the rows already produced."""

    def __init__(self, path: Path | str, columns: Sequence[str]):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh: TextIO = open(self.path, "w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._fh, lineterminator="\n")
        self._writer.writerow(columns)

    def write(self, values: Iterable) -> None:
        self._writer.writerow([format_value(v) for v in values])

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "CsvSink":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def metrics_values(report: MetricsReport) -> list:
    row = report.row()
    return [row[c] for c in METRIC_COLUMNS]


def write_metrics(sink: CsvSink, report: MetricsReport) -> None:
    sink.write(metrics_values(report))


def write_betweenness(sink: CsvSink, report: MetricsReport, snapshot: TopologySnapshot) -> None:
    n_sats = snapshot.n_sats
    for i in range(n_sats):
        sink.write((report.time, "sat", i, float(report.bc[i])))
    for j, sid in enumerate(snapshot.station_ids):
        sink.write((report.time, "gs", sid, float(report.bc[n_sats + j])))


def edge_rows(t: float, isl_edges: np.ndarray, fl_edges: np.ndarray):
    for a, b in np.asarray(isl_edges).reshape(-1, 2):
        yield (t, "sat", int(a), "sat", int(b), "isl")
    for s, g in np.asarray(fl_edges).reshape(-1, 2):
        yield (t, "sat", int(s), "gs", int(g), "fl")


def write_edges(path: Path | str, snapshot: TopologySnapshot) -> None:
    with CsvSink(path, EDGE_COLUMNS) as sink:
        for row in edge_rows(snapshot.time, snapshot.isl_edges, snapshot.fl_edges):
            sink.write(row)


def write_coverage(path: Path | str, profile: CoverageProfile) -> None:
    with CsvSink(path, COVERAGE_COLUMNS) as sink:
        for row in profile.rows():
            sink.write(row)


def write_satellites(path: Path | str, constellation: Constellation) -> None:
    with CsvSink(path, SATELLITE_COLUMNS) as sink:
        for i, sid in enumerate(constellation.ids):
            spec = constellation.shells[sid.shell_index]
            sink.write(
                (
                    i,
                    spec.name,
                    sid.plane_index,
                    sid.slot_index,
                    spec.altitude_km,
                    spec.inclination_deg,
                    round(math.degrees(constellation.raan[i]), 9),
                    round(math.degrees(constellation.initial_phase[i]), 9),
                )
            )


def read_csv(path: Path | str) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
