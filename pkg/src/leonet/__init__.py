"""Time-evolving multi-shell LEO constellation graphs and their network metrics."""

from .config import SimulationConfig, load_config
from .constellation import STARLINK_SHELLS, Constellation, ShellSpec, SatelliteId, generate_constellation
from .ground import DropoutSchedule, GroundStation, load_stations, sample_catalog
from .links import FeederPolicy, IslConfig, TopologySnapshot
from .metrics import MetricsReport, compute_metrics

__version__ = "0.1.0"

__all__ = [
    "STARLINK_SHELLS",
    "Constellation",
    "DropoutSchedule",
    "FeederPolicy",
    "GroundStation",
    "IslConfig",
    "MetricsReport",
    "SatelliteId",
    "ShellSpec",
    "SimulationConfig",
    "TopologySnapshot",
    "compute_metrics",
    "generate_constellation",
    "load_config",
    "load_stations",
    "sample_catalog",
]
