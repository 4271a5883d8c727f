"""Lifetime simulation of energy-constrained sensor networks plus
graph metrics over the topology snapshots the simulation emits."""

from .config import ConfigError, SimConfig, config_from_dict, load_config
from .model import (
    GraphSnapshot,
    Mode,
    NodeRecord,
    Role,
    TemporalTrace,
    TraceError,
    TraceFormatError,
    TraceValidationError,
    trace_from_lines,
    trace_read,
    trace_write,
)
from .sim import NoRouteError, OutOfRangeError, Simulation, simulate

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "SimConfig",
    "config_from_dict",
    "load_config",
    "GraphSnapshot",
    "Mode",
    "NodeRecord",
    "Role",
    "TemporalTrace",
    "TraceError",
    "TraceFormatError",
    "TraceValidationError",
    "trace_from_lines",
    "trace_read",
    "trace_write",
    "NoRouteError",
    "OutOfRangeError",
    "Simulation",
    "simulate",
    "__version__",
]
