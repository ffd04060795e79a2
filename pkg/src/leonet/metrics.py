"""Complex-network metrics over topology snapshots.

Shortest-path quantities (diameter, average path length, betweenness) come
from one pass of single-source searches, one per node. Sources are split into
fixed-size blocks; each block writes its own partial betweenness row and the
rows are summed in block order, so the result does not depend on the number
of worker threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _cc

from . import _kernels
from .errors import InvariantError, UndefinedMetricError
from .links import TopologySnapshot

Weighting = Literal["hops", "distance"]
Scope = Literal["largest_component", "per_component"]

METRIC_COLUMNS = (
    "t",
    "avg_deg_sat",
    "avg_deg_gs",
    "clust_sat",
    "clust_gs",
    "components",
    "diameter",
    "apl",
    "div_bc",
    "isolated_gs",
)


def _as_csr(graph) -> sp.csr_matrix:
    if isinstance(graph, TopologySnapshot):
        return graph.adjacency
    a = sp.csr_matrix(graph)
    a.sort_indices()
    return a


def default_threads() -> int:
    return os.cpu_count() or 1


@dataclass(frozen=True)
class PathStats:
    """Per-source results of the all-sources search."""

    ecc: np.ndarray  # eccentricity within the source's component
    dist_sum: np.ndarray  # sum of distances to reachable nodes
    reach: np.ndarray  # number of reachable nodes, excluding the source
    bc_raw: np.ndarray | None  # sum over ordered pairs of sigma_st(v)/sigma_st


def _block_size(n: int) -> int:
    return max(32, -(-n // 512))


def all_sources(graph, weights: np.ndarray | None = None, want_bc: bool = True, threads: int | None = None) -> PathStats:
    """Run a shortest-path search from every node.

    ``weights`` (aligned with the CSR ``data``/``indices`` order of the
    adjacency) switches from breadth-first search to Dijkstra.
    """
    a = _as_csr(graph)
    n = a.shape[0]
    indptr = a.indptr.astype(np.int64)
    indices = a.indices.astype(np.int64)
    block = _block_size(n)
    starts = list(range(0, n, block))
    partial = np.zeros((len(starts), n)) if want_bc else np.zeros((1, 1))
    ecc = np.zeros(n, dtype=np.float64)
    dsum = np.zeros(n, dtype=np.float64)
    reach = np.zeros(n, dtype=np.int64)

    def run(b: int) -> None:
        lo, hi = starts[b], min(n, starts[b] + block)
        row = partial[b] if want_bc else partial[0]
        if weights is None:
            _kernels.bfs_block(indptr, indices, lo, hi, want_bc, row, ecc, dsum, reach)
        else:
            _kernels.dijkstra_block(indptr, indices, weights, lo, hi, row, ecc, dsum, reach)

    threads = threads or default_threads()
    if n == 0:
        pass
    elif threads == 1 or len(starts) == 1:
        for b in range(len(starts)):
            run(b)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, range(len(starts))))
    bc_raw = partial.sum(axis=0) if want_bc else None
    return PathStats(ecc, dsum, reach, bc_raw)


def _csr_weights(snapshot: TopologySnapshot) -> np.ndarray:
    """Edge lengths laid out in the adjacency's CSR order."""
    e = snapshot.edges
    lengths = snapshot.edge_lengths()
    n = snapshot.node_count
    w = sp.csr_matrix(
        (np.concatenate([lengths, lengths]), (np.concatenate([e[:, 0], e[:, 1]]), np.concatenate([e[:, 1], e[:, 0]]))),
        shape=(n, n),
    )
    w.sort_indices()
    a = snapshot.adjacency
    if not (np.array_equal(w.indptr, a.indptr) and np.array_equal(w.indices, a.indices)):
        raise InvariantError("weight layout does not match adjacency")
    return w.data.astype(np.float64)


def degrees(graph) -> np.ndarray:
    return np.diff(_as_csr(graph).indptr)


def degree_stats(snapshot: TopologySnapshot) -> tuple[float | None, float | None]:
    """Mean degree of satellites and of active stations; ``None`` for an empty class."""
    deg = degrees(snapshot)
    sats, gs = deg[: snapshot.n_sats], deg[snapshot.n_sats :]
    return (float(sats.mean()) if sats.size else None, float(gs.mean()) if gs.size else None)


def clustering_all(graph) -> np.ndarray:
    """Local clustering coefficient of every node (0 for degree < 2)."""
    a = _as_csr(graph).astype(np.int64)
    a.data[:] = 1
    tri2 = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel()  # = 2 * edges among neighbours
    k = np.diff(a.indptr)
    out = np.zeros(a.shape[0])
    ok = k >= 2
    out[ok] = tri2[ok] / (k[ok] * (k[ok] - 1))
    return out


def local_clustering(graph, node: int) -> float:
    a = _as_csr(graph)
    if not 0 <= node < a.shape[0]:
        raise KeyError(f"unknown node {node}")
    nbrs = a.indices[a.indptr[node] : a.indptr[node + 1]]
    k = len(nbrs)
    if k < 2:
        return 0.0
    nbr_set = set(int(x) for x in nbrs)
    links = 0
    for u in nbrs:
        links += sum(1 for w in a.indices[a.indptr[u] : a.indptr[u + 1]] if int(w) in nbr_set)
    return links / (k * (k - 1))  # each neighbour pair was counted twice


def connected_components(graph) -> tuple[int, np.ndarray]:
    """Component count and a label per node. Labels are ordered by each component's smallest node."""
    a = _as_csr(graph)
    if a.shape[0] == 0:
        return 0, np.zeros(0, dtype=np.int64)
    count, labels = _cc(a, directed=False)
    return int(count), labels.astype(np.int64)


def component_sizes(labels: np.ndarray) -> np.ndarray:
    return np.bincount(labels) if labels.size else np.zeros(0, dtype=np.int64)


def largest_component_label(labels: np.ndarray) -> int:
    """Label of the biggest component; ties go to the one holding the smallest node."""
    sizes = component_sizes(labels)
    return int(np.argmax(sizes))


def _scope_values(stats: PathStats, members: np.ndarray) -> tuple[float, float]:
    if members.size < 2:
        return 0.0, 0.0
    diameter = float(stats.ecc[members].max())
    pairs = float(stats.reach[members].sum())
    apl = float(stats.dist_sum[members].sum()) / pairs
    return diameter, apl


def diameter_apl(graph, scope: Scope = "largest_component", threads: int | None = None, stats: PathStats | None = None):
    """Exact hop diameter and average path length.

    ``largest_component`` returns a single ``(diameter, apl)``;
    ``per_component`` returns a list of them, biggest component first
    (singletons give ``(0, 0)``).
    """
    if stats is None:
        stats = all_sources(graph, want_bc=False, threads=threads)
    _, labels = connected_components(graph)
    sizes = component_sizes(labels)
    if scope == "largest_component":
        label = largest_component_label(labels)
        if sizes.size == 0 or sizes[label] < 2:
            raise UndefinedMetricError("largest component has no edges")
        return _scope_values(stats, np.flatnonzero(labels == label))
    if scope == "per_component":
        order = sorted(range(len(sizes)), key=lambda c: -sizes[c])
        return [_scope_values(stats, np.flatnonzero(labels == c)) for c in order]
    raise ValueError(f"unknown scope {scope!r}")


def normalize_betweenness(raw: np.ndarray) -> np.ndarray:
    n = raw.size
    if n < 3:
        return np.zeros(n)
    return raw / ((n - 1) * (n - 2))


def betweenness(graph, weights: np.ndarray | None = None, threads: int | None = None) -> np.ndarray:
    """Normalised betweenness of every node: ordered-pair dependency sum over (n-1)(n-2)."""
    return normalize_betweenness(all_sources(graph, weights=weights, threads=threads).bc_raw)


def divergence(values: Sequence[float], n_g: int | None = None) -> float:
    """Uniformity of station betweenness: (sum x)^2 / (n_g * sum x^2); 0 if every value is 0."""
    x = np.asarray(values, dtype=float)
    if n_g is None:
        n_g = x.size
    if x.size == 0 or n_g <= 0:
        raise UndefinedMetricError("divergence needs at least one station")
    peak = float(np.abs(x).max())
    if peak == 0.0:
        return 0.0
    x = x / peak  # keeps the squares clear of underflow
    return float(x.sum()) ** 2 / (n_g * float(np.dot(x, x)))


@dataclass(frozen=True, eq=False)
class MetricsReport:
    time: float
    node_count: int
    n_stations: int
    avg_degree_sat: float | None
    avg_degree_gs: float | None
    avg_clustering_sat: float | None
    avg_clustering_gs: float | None
    component_count: int
    component_sizes: tuple[int, ...]
    diameter: float
    apl: float
    bc: np.ndarray = field(repr=False)
    div_bc: float | None
    isolated_gs_count: int

    def validate(self) -> None:
        if self.apl > self.diameter + 1e-9:
            raise InvariantError(f"t={self.time}: apl {self.apl} exceeds diameter {self.diameter}")
        if self.diameter > self.node_count - 1:
            raise InvariantError(f"t={self.time}: diameter {self.diameter} exceeds node_count - 1")
        if self.bc.size and ((self.bc < -1e-12).any() or (self.bc > 1 + 1e-9).any()):
            raise InvariantError(f"t={self.time}: betweenness outside [0, 1]")
        if sum(self.component_sizes) != self.node_count:
            raise InvariantError(f"t={self.time}: component sizes do not cover the node set")
        if self.div_bc is not None and self.div_bc > 0:
            lo = 1.0 / self.n_stations
            if not lo - 1e-9 <= self.div_bc <= 1 + 1e-9:
                raise InvariantError(f"t={self.time}: div_bc {self.div_bc} outside [{lo}, 1]")

    def row(self) -> dict[str, object]:
        return {
            "t": self.time,
            "avg_deg_sat": self.avg_degree_sat,
            "avg_deg_gs": self.avg_degree_gs,
            "clust_sat": self.avg_clustering_sat,
            "clust_gs": self.avg_clustering_gs,
            "components": self.component_count,
            "diameter": self.diameter,
            "apl": self.apl,
            "div_bc": self.div_bc,
            "isolated_gs": self.isolated_gs_count,
        }


def _mean_or_none(x: np.ndarray) -> float | None:
    return float(x.mean()) if x.size else None


def compute_metrics(
    snapshot: TopologySnapshot, weighting: Weighting = "hops", threads: int | None = None
) -> MetricsReport:
    """Full metric bundle for one snapshot.

    Diameter and APL are always hop counts. ``weighting="distance"`` makes
    betweenness follow the geometrically shortest paths instead.
    """
    n_sats = snapshot.n_sats
    deg = degrees(snapshot)
    clust = clustering_all(snapshot)
    count, labels = connected_components(snapshot)
    sizes = component_sizes(labels)

    hop_stats = all_sources(snapshot, want_bc=(weighting == "hops"), threads=threads)
    if weighting == "hops":
        raw = hop_stats.bc_raw
    elif weighting == "distance":
        raw = all_sources(snapshot, weights=_csr_weights(snapshot), threads=threads).bc_raw
    else:
        raise ValueError(f"unknown path weighting {weighting!r}")
    bc = normalize_betweenness(raw)

    label = largest_component_label(labels) if labels.size else -1
    if label >= 0 and sizes[label] >= 2:
        diameter, apl = _scope_values(hop_stats, np.flatnonzero(labels == label))
    else:
        diameter, apl = 0.0, 0.0

    gs_bc = bc[n_sats:]
    report = MetricsReport(
        time=snapshot.time,
        node_count=snapshot.node_count,
        n_stations=snapshot.n_stations,
        avg_degree_sat=_mean_or_none(deg[:n_sats]),
        avg_degree_gs=_mean_or_none(deg[n_sats:]),
        avg_clustering_sat=_mean_or_none(clust[:n_sats]),
        avg_clustering_gs=_mean_or_none(clust[n_sats:]),
        component_count=count,
        component_sizes=tuple(int(s) for s in sorted(sizes, reverse=True)),
        diameter=diameter,
        apl=apl,
        bc=bc,
        div_bc=divergence(gs_bc) if gs_bc.size else None,
        isolated_gs_count=int((deg[n_sats:] == 0).sum()),
    )
    report.validate()
    return report


def format_value(v) -> str:
    """CSV cell text: empty for absent values, repr-exact floats otherwise."""
    if v is None:
        return ""
    if isinstance(v, float) or isinstance(v, np.floating):
        v = float(v)
        if math.isfinite(v) and v == int(v) and abs(v) < 2**53:
            return str(int(v))
        return repr(v)
    return str(v)
