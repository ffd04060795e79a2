"""Inter-satellite link wiring, feeder-link assignment and snapshot composition."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal, Sequence

import numpy as np
import scipy.sparse as sp

from .constellation import Constellation
from .errors import ConfigurationError, InvariantError
from .geometry import pair_elevations, visible_pairs
from .ground import GroundStation

ELEVATION_TOLERANCE_DEG = 1e-9

IslStyle = Literal["grid4", "tri3"]
Seam = Literal["wrap", "cut"]
FeederKind = Literal["max_elevation", "random_above"]


@dataclass(frozen=True)
class IslConfig:
    """ISL wiring pattern.

    ``grid4`` links every satellite to its fore/aft in-plane neighbours and to
    the same-slot satellites of both adjacent planes. ``tri3`` keeps the
    in-plane ring and gives every satellite exactly one cross-plane link, to
    the eastern neighbour when ``plane + slot`` is even and to the western one
    otherwise (a brick-wall pattern, so the mean degree is 3 on even plane
    counts). ``seam="cut"`` drops the links between the last and first plane.
    """

    style: IslStyle = "grid4"
    seam: Seam = "wrap"

    def __post_init__(self) -> None:
        if self.style not in ("grid4", "tri3"):
            raise ConfigurationError(f"unknown ISL style {self.style!r} (expected grid4 or tri3)")
        if self.seam not in ("wrap", "cut"):
            raise ConfigurationError(f"unknown seam mode {self.seam!r} (expected wrap or cut)")


@dataclass(frozen=True)
class FeederPolicy:
    kind: FeederKind = "max_elevation"
    gs_threshold: float = 25.0
    random_threshold: float = 40.0
    sat_capacity: int = 2
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("max_elevation", "random_above"):
            raise ConfigurationError(f"unknown feeder policy {self.kind!r}")
        for name in ("gs_threshold", "random_threshold"):
            v = getattr(self, name)
            if not 0.0 <= v < 90.0:
                raise ConfigurationError(f"{name} must be in [0, 90), got {v}")
        if self.sat_capacity < 1:
            raise ConfigurationError(f"sat_capacity must be >= 1, got {self.sat_capacity}")


def _shell_isls(offset: int, P: int, S: int, config: IslConfig) -> list[tuple[int, int]]:
    def node(p: int, s: int) -> int:
        return offset + p * S + s

    edges = []
    for p in range(P):
        for s in range(S):
            edges.append((node(p, s), node(p, (s + 1) % S)))
    last = P - 1 if config.seam == "cut" else P
    if P < 2:
        last = 0
    for p in range(last):
        q = (p + 1) % P
        for s in range(S):
            if config.style == "grid4" or (p + s) % 2 == 0:
                edges.append((node(p, s), node(q, s)))
    return edges


def build_isls(constellation: Constellation, config: IslConfig) -> np.ndarray:
    """Intra-shell ISL edge array, shape (E, 2), each row ``(i, j)`` with ``i < j``, rows sorted."""
    edges: list[tuple[int, int]] = []
    for k, spec in enumerate(constellation.shells):
        if spec.sats_per_plane < 3:
            raise ConfigurationError(
                f"shell {spec.name!r}: ISL ring needs >= 3 satellites per plane, got {spec.sats_per_plane}"
            )
        edges.extend(_shell_isls(constellation.offsets[k], spec.num_planes, spec.sats_per_plane, config))
    if not edges:
        return np.zeros((0, 2), dtype=np.int64)
    arr = np.sort(np.array(edges, dtype=np.int64), axis=1)
    arr = np.unique(arr, axis=0)
    arr.setflags(write=False)
    return arr


def assign_feeder_links(
    sat_positions: np.ndarray,
    stations: Sequence[GroundStation],
    policy: FeederPolicy,
    previous: Iterable[tuple[int, int]] = (),
    rng: np.random.Generator | None = None,
    station_positions: np.ndarray | None = None,
) -> np.ndarray:
    """Feeder links for one instant, as an (K, 2) array of ``(satellite index, station id)``.

    ``sat_positions`` and ``station_positions`` must share a frame and time.
    Links in ``previous`` survive while their elevation stays at or above the
    station threshold and both ends keep spare capacity; free capacity is then
    filled according to ``policy``. Rows come back sorted by (station id,
    satellite index).
    """
    G = len(stations)
    N = len(sat_positions)
    if G == 0 or N == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if station_positions is None:
        station_positions = np.array([gs.ecef for gs in stations])
    row_of = {gs.id: r for r, gs in enumerate(stations)}
    ids = np.array([gs.id for gs in stations], dtype=np.int64)
    cap_st = np.array([gs.max_links for gs in stations], dtype=np.int64)
    load_st = np.zeros(G, dtype=np.int64)
    load_sat = np.zeros(N, dtype=np.int64)
    linked: set[tuple[int, int]] = set()

    def accept(r: int, s: int) -> None:
        linked.add((r, s))
        load_st[r] += 1
        load_sat[s] += 1

    # 1. stickiness
    prev = [(int(sat), row_of[int(sid)]) for sat, sid in previous if int(sid) in row_of and 0 <= int(sat) < N]
    if prev:
        ps = np.array([p[0] for p in prev], dtype=np.int64)
        pr = np.array([p[1] for p in prev], dtype=np.int64)
        pe = pair_elevations(station_positions[pr], sat_positions[ps])
        ok = pe >= policy.gs_threshold
        ps, pr, pe = ps[ok], pr[ok], pe[ok]
        for k in np.lexsort((ps, ids[pr], -pe)):
            r, s = int(pr[k]), int(ps[k])
            if (r, s) not in linked and load_st[r] < cap_st[r] and load_sat[s] < policy.sat_capacity:
                accept(r, s)

    # 2. fill spare capacity
    if (load_st < cap_st).any():
        if policy.kind == "max_elevation":
            rows, cols, el = visible_pairs(station_positions, sat_positions, policy.gs_threshold)
            _fill_max_elevation(rows, cols, el, ids, cap_st, load_st, load_sat, linked, policy, accept)
        else:
            if rng is None:
                rng = np.random.default_rng(policy.seed)
            rows, cols, _ = visible_pairs(station_positions, sat_positions, policy.random_threshold)
            _fill_random(rows, cols, ids, cap_st, load_st, load_sat, linked, policy, rng, accept)

    if not linked:
        return np.zeros((0, 2), dtype=np.int64)
    out = np.array([(s, ids[r]) for r, s in linked], dtype=np.int64)
    out = out[np.lexsort((out[:, 0], out[:, 1]))]
    return out


def _fill_max_elevation(rows, cols, el, ids, cap_st, load_st, load_sat, linked, policy, accept):
    """Global greedy: all candidate pairs in descending elevation, ties by (station id, satellite)."""
    keep = (load_st[rows] < cap_st[rows]) & (load_sat[cols] < policy.sat_capacity)
    rows, cols, el = rows[keep], cols[keep], el[keep]
    if rows.size == 0:
        return
    remaining = int(np.unique(rows).size)
    for k in np.lexsort((cols, ids[rows], -el)):
        r = int(rows[k])
        s = int(cols[k])
        if load_st[r] >= cap_st[r] or load_sat[s] >= policy.sat_capacity or (r, s) in linked:
            continue
        accept(r, s)
        if load_st[r] >= cap_st[r]:
            remaining -= 1
            if remaining == 0:
                break


def _fill_random(rows, cols, ids, cap_st, load_st, load_sat, linked, policy, rng, accept):
    """Stations in ascending id order draw uniformly among their eligible satellites."""
    by_row: dict[int, list[int]] = {}
    for r, s in zip(rows.tolist(), cols.tolist()):
        by_row.setdefault(r, []).append(s)
    for r in sorted(by_row, key=lambda r: ids[r]):
        cand = [s for s in by_row[r] if load_sat[s] < policy.sat_capacity and (r, s) not in linked]
        while load_st[r] < cap_st[r] and cand:
            s = cand.pop(int(rng.integers(len(cand))))
            accept(r, s)


@dataclass(frozen=True, eq=False)
class TopologySnapshot:
    """Undirected graph of the network at one instant.

    Node numbering: satellites ``0 .. n_sats-1`` in constellation order, then
    the active stations in ``station_ids`` order.
    """

    time: float
    n_sats: int
    station_ids: tuple[int, ...]
    isl_edges: np.ndarray  # (E, 2) satellite indices
    fl_edges: np.ndarray  # (K, 2) (satellite index, station id)
    sat_positions: np.ndarray | None = field(default=None, repr=False)  # ECEF km
    station_positions: np.ndarray | None = field(default=None, repr=False)

    @property
    def node_count(self) -> int:
        return self.n_sats + len(self.station_ids)

    @property
    def n_stations(self) -> int:
        return len(self.station_ids)

    @cached_property
    def _station_node(self) -> dict[int, int]:
        return {sid: self.n_sats + j for j, sid in enumerate(self.station_ids)}

    def station_node(self, station_id: int) -> int:
        return self._station_node[station_id]

    @cached_property
    def edges(self) -> np.ndarray:
        """All edges as node-index pairs: ISLs first, then feeder links."""
        fl = self.fl_edges
        if len(fl):
            fl_nodes = np.column_stack([fl[:, 0], [self._station_node[int(s)] for s in fl[:, 1]]])
        else:
            fl_nodes = np.zeros((0, 2), dtype=np.int64)
        return np.vstack([np.asarray(self.isl_edges, dtype=np.int64).reshape(-1, 2), fl_nodes.astype(np.int64)])

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        n = self.node_count
        e = self.edges
        data = np.ones(2 * len(e), dtype=np.int8)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        a = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
        a.sort_indices()
        return a

    def edge_lengths(self) -> np.ndarray:
        """Euclidean length (km) of every edge in :attr:`edges` order."""
        if self.sat_positions is None or (self.n_stations and self.station_positions is None):
            raise ValueError("snapshot carries no positions; distance weighting unavailable")
        pos = self.sat_positions
        if self.n_stations:
            pos = np.vstack([pos, self.station_positions])
        e = self.edges
        return np.linalg.norm(pos[e[:, 0]] - pos[e[:, 1]], axis=1)


def compose_snapshot(
    t: float,
    constellation: Constellation,
    isl_edges: np.ndarray,
    fl_edges: np.ndarray,
    stations: Sequence[GroundStation] = (),
    policy: FeederPolicy | None = None,
    sat_positions: np.ndarray | None = None,
) -> TopologySnapshot:
    """Assemble and validate a snapshot. Raises :class:`InvariantError` on any inconsistency."""
    n = len(constellation)
    if sat_positions is None:
        sat_positions = constellation.positions_ecef(t)
    st_pos = np.array([gs.ecef for gs in stations]).reshape(-1, 3)
    isl = np.asarray(isl_edges, dtype=np.int64).reshape(-1, 2)
    fl = np.asarray(fl_edges, dtype=np.int64).reshape(-1, 2)

    if len(isl):
        if (isl < 0).any() or (isl >= n).any():
            raise InvariantError("ISL endpoint outside the satellite range")
        if (isl[:, 0] == isl[:, 1]).any():
            raise InvariantError("ISL self-loop")
        canon = np.sort(isl, axis=1)
        if len(np.unique(canon, axis=0)) != len(canon):
            raise InvariantError("duplicate ISL edge")
        shell = constellation.shell_index
        if (shell[isl[:, 0]] != shell[isl[:, 1]]).any():
            raise InvariantError("ISL crosses shells")

    ids = [gs.id for gs in stations]
    if len(set(ids)) != len(ids):
        raise InvariantError("duplicate station id in active set")
    if len(fl):
        row_of = {sid: r for r, sid in enumerate(ids)}
        if (fl[:, 0] < 0).any() or (fl[:, 0] >= n).any():
            raise InvariantError("feeder link to unknown satellite")
        try:
            rows = np.array([row_of[int(s)] for s in fl[:, 1]], dtype=np.int64)
        except KeyError as exc:
            raise InvariantError(f"feeder link to inactive station {exc.args[0]}") from None
        if len(np.unique(fl, axis=0)) != len(fl):
            raise InvariantError("duplicate feeder link")
        st_deg = np.bincount(rows, minlength=len(ids))
        caps = np.array([gs.max_links for gs in stations])
        if (st_deg > caps).any():
            raise InvariantError("station feeder-link capacity exceeded")
        if policy is not None:
            if np.bincount(fl[:, 0], minlength=n).max() > policy.sat_capacity:
                raise InvariantError("satellite feeder-link capacity exceeded")
            el = pair_elevations(st_pos[rows], sat_positions[fl[:, 0]])
            if (el < policy.gs_threshold - ELEVATION_TOLERANCE_DEG).any():
                raise InvariantError("feeder link below the elevation threshold")

    isl.setflags(write=False)
    fl.setflags(write=False)
    return TopologySnapshot(
        time=float(t),
        n_sats=n,
        station_ids=tuple(ids),
        isl_edges=isl,
        fl_edges=fl,
        sat_positions=sat_positions,
        station_positions=st_pos,
    )
