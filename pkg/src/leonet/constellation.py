"""Walker-delta shell generation and circular two-body propagation.

Satellites are addressed by ``SatelliteId(shell, plane, slot)``. A
:class:`Constellation` stores the elements of every satellite in flat numpy
arrays (generation order: shell, then plane, then slot) so whole-constellation
positions can be evaluated in one vectorised call; the flat position of a
satellite in those arrays is its *satellite index* and is what the link engine
and the graph metrics use as node number.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

MU_EARTH = 398600.4418  # km^3 / s^2
EARTH_RADIUS_KM = 6371.0


@dataclass(frozen=True)
class ShellSpec:
    """Static description of one Walker-delta shell."""

    name: str
    altitude_km: float
    inclination_deg: float
    num_planes: int
    sats_per_plane: int
    phasing_factor: int = 1

    def __post_init__(self) -> None:
        if self.num_planes < 1:
            raise ConfigurationError(f"shell {self.name!r}: num_planes must be >= 1, got {self.num_planes}")
        if self.sats_per_plane < 1:
            raise ConfigurationError(
                f"shell {self.name!r}: sats_per_plane must be >= 1, got {self.sats_per_plane}"
            )
        if not 0.0 <= self.inclination_deg <= 180.0:
            raise ConfigurationError(
                f"shell {self.name!r}: inclination_deg must be in [0, 180], got {self.inclination_deg}"
            )
        if not self.altitude_km > 0.0:
            raise ConfigurationError(f"shell {self.name!r}: altitude_km must be > 0, got {self.altitude_km}")
        if not 0 <= self.phasing_factor < self.num_planes:
            raise ConfigurationError(
                f"shell {self.name!r}: phasing_factor must be in [0, num_planes), "
                f"got {self.phasing_factor} with num_planes={self.num_planes}"
            )

    @property
    def size(self) -> int:
        return self.num_planes * self.sats_per_plane

    @property
    def semi_major_axis_km(self) -> float:
        return EARTH_RADIUS_KM + self.altitude_km

    @property
    def period_s(self) -> float:
        return 2.0 * math.pi * math.sqrt(self.semi_major_axis_km**3 / MU_EARTH)


# Starlink Gen 1 (S1-S4) and the assumed Gen 2 shells (S5, S6).
STARLINK_SHELLS: tuple[ShellSpec, ...] = (
    ShellSpec("S1", 550.0, 53.0, 72, 22),
    ShellSpec("S2", 540.0, 53.2, 72, 22),
    ShellSpec("S3", 570.0, 70.0, 36, 20),
    ShellSpec("S4", 560.0, 97.6, 6, 58),
    ShellSpec("S5", 530.0, 43.0, 56, 60),
    ShellSpec("S6", 535.0, 33.0, 56, 60),
)


@dataclass(frozen=True, order=True)
class SatelliteId:
    shell_index: int
    plane_index: int
    slot_index: int

    def __str__(self) -> str:
        return f"{self.shell_index}:{self.plane_index}:{self.slot_index}"


@dataclass(frozen=True)
class OrbitalElements:
    """Circular-orbit elements. Angles in radians, distances in km."""

    semi_major_axis: float
    inclination: float
    raan: float
    initial_phase: float
    mean_motion: float

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.mean_motion


@dataclass(frozen=True)
class StateVector:
    position: np.ndarray  # km, inertial
    velocity: np.ndarray  # km/s, inertial
    time: float


def _plane_basis(inclination, raan):
    """Unit vectors spanning an orbital plane: towards the ascending node and 90 deg ahead of it."""
    cos_o, sin_o = np.cos(raan), np.sin(raan)
    cos_i, sin_i = np.cos(inclination), np.sin(inclination)
    p_hat = np.stack([cos_o, sin_o, np.zeros_like(cos_o)], axis=-1)
    q_hat = np.stack([-sin_o * cos_i, cos_o * cos_i, sin_i * np.ones_like(cos_o)], axis=-1)
    return p_hat, q_hat


def generate_walker_shell(spec: ShellSpec, shell_index: int = 0) -> list[tuple[SatelliteId, OrbitalElements]]:
    """Lay out one Walker-delta shell.

    Plane ``p`` gets RAAN ``p * 360/P``; slot ``s`` of plane ``p`` starts at
    argument of latitude ``s * 360/S + p * F * 360/(P*S)``. All angles are
    reduced to [0, 360) before conversion to radians.
    """
    a = spec.semi_major_axis_km
    inc = math.radians(spec.inclination_deg)
    n = math.sqrt(MU_EARTH / a**3)
    P, S, F = spec.num_planes, spec.sats_per_plane, spec.phasing_factor
    out = []
    for p in range(P):
        raan = math.radians((p * 360.0 / P) % 360.0)
        for s in range(S):
            phase_deg = (s * 360.0 / S + p * F * 360.0 / (P * S)) % 360.0
            out.append((SatelliteId(shell_index, p, s), OrbitalElements(a, inc, raan, math.radians(phase_deg), n)))
    return out


def propagate(el: OrbitalElements, t: float) -> StateVector:
    """Inertial state of a satellite on its circular orbit ``t`` seconds after epoch."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    u = el.initial_phase + el.mean_motion * t
    p_hat, q_hat = _plane_basis(np.float64(el.inclination), np.float64(el.raan))
    pos = el.semi_major_axis * (math.cos(u) * p_hat + math.sin(u) * q_hat)
    vel = el.semi_major_axis * el.mean_motion * (-math.sin(u) * p_hat + math.cos(u) * q_hat)
    return StateVector(position=pos, velocity=vel, time=float(t))


class Constellation(Mapping):
    """Ephemeris table of a multi-shell constellation, keyed by SatelliteId."""

    def __init__(self, specs: Sequence[ShellSpec]):
        specs = tuple(specs)
        if not specs:
            raise ConfigurationError("a constellation needs at least one shell")
        names = [s.name for s in specs]
        dupes = sorted({x for x in names if names.count(x) > 1})
        if dupes:
            raise ConfigurationError(f"duplicate shell names: {', '.join(dupes)}")
        self.shells = specs

        ids: list[SatelliteId] = []
        rows = []
        offsets = [0]
        for k, spec in enumerate(specs):
            for sid, el in generate_walker_shell(spec, k):
                ids.append(sid)
                rows.append((el.semi_major_axis, el.inclination, el.raan, el.initial_phase, el.mean_motion))
            offsets.append(len(ids))
        arr = np.array(rows, dtype=float).reshape(-1, 5)
        self.ids = tuple(ids)
        self._index = {sid: i for i, sid in enumerate(ids)}
        self.offsets = tuple(offsets)
        self.semi_major_axis = arr[:, 0]
        self.inclination = arr[:, 1]
        self.raan = arr[:, 2]
        self.initial_phase = arr[:, 3]
        self.mean_motion = arr[:, 4]
        self.shell_index = np.array([s.shell_index for s in ids], dtype=np.int64)
        self.plane_index = np.array([s.plane_index for s in ids], dtype=np.int64)
        self.slot_index = np.array([s.slot_index for s in ids], dtype=np.int64)
        self._p_hat, self._q_hat = _plane_basis(self.inclination, self.raan)
        for a in (self.semi_major_axis, self.inclination, self.raan, self.initial_phase, self.mean_motion):
            a.setflags(write=False)

    def __getitem__(self, sid: SatelliteId) -> OrbitalElements:
        i = self._index[sid]
        return OrbitalElements(
            float(self.semi_major_axis[i]),
            float(self.inclination[i]),
            float(self.raan[i]),
            float(self.initial_phase[i]),
            float(self.mean_motion[i]),
        )

    def __iter__(self) -> Iterator[SatelliteId]:
        return iter(self.ids)

    def __len__(self) -> int:
        return len(self.ids)

    def index_of(self, sid: SatelliteId) -> int:
        return self._index[sid]

    def shell_range(self, k: int) -> range:
        return range(self.offsets[k], self.offsets[k + 1])

    def positions_eci(self, t: float) -> np.ndarray:
        """(N, 3) inertial positions in km at time ``t``."""
        u = self.initial_phase + self.mean_motion * t
        return self.semi_major_axis[:, None] * (np.cos(u)[:, None] * self._p_hat + np.sin(u)[:, None] * self._q_hat)

    def velocities_eci(self, t: float) -> np.ndarray:
        u = self.initial_phase + self.mean_motion * t
        speed = (self.semi_major_axis * self.mean_motion)[:, None]
        return speed * (-np.sin(u)[:, None] * self._p_hat + np.cos(u)[:, None] * self._q_hat)

    def positions_ecef(self, t: float) -> np.ndarray:
        from .geometry import eci_to_ecef

        return eci_to_ecef(self.positions_eci(t), t)


def generate_constellation(specs: Sequence[ShellSpec]) -> Constellation:
    return Constellation(specs)
