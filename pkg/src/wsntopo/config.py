"""Simulation parameters and config-file loading.

All knobs of a run live in one frozen :class:`SimConfig`.  Time is
measured in rounds (one packet per alive sensor per round); the nominal
radio data rate is carried for documentation only and never enters the
arithmetic.

Config files are flat TOML: scalar keys mirror the field names,
``sink_positions`` is an array of ``[x, y]`` pairs.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, fields, replace

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

# Hardware bounds on a transmission range (metres): every configured
# power level must fall inside this window.
RANGE_MIN = 10.0
RANGE_MAX = 50.0


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"config field {field!r}: {message}")
        self.field = field


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one simulated deployment.

    Defaults describe the reference scenario: 100 sensors uniformly
    deployed on a 100 m x 100 m area, one sink at the centre, 1 J of
    initial energy per sensor, four discrete power levels, and a
    first-order radio model (``e_elec`` per bit plus ``eps_amp`` times
    range squared per bit).
    """

    area_width: float = 100.0
    area_height: float = 100.0
    n_sensors: int = 100
    sink_positions: tuple[tuple[float, float], ...] = ((50.0, 50.0),)
    seed: int = 1
    initial_energy: float = 1.0
    power_level_ranges: tuple[float, ...] = (12.5, 25.0, 37.5, 50.0)
    neighbor_limit: int = 3
    selfish_threshold: float = 0.05
    packet_bits: int = 1000
    e_elec: float = 50e-9
    eps_amp: float = 100e-12
    data_rate_kbps: float = 20.0  # informational; rounds are the time unit
    snapshot_interval: int = 1
    max_rounds: int = 1_000_000  # safety cap, not the expected stop

    def validate(self) -> None:
        """Raise :class:`ConfigError` on the first violated constraint."""
        if not self.area_width > 0:
            raise ConfigError("area_width", "must be > 0")
        if not self.area_height > 0:
            raise ConfigError("area_height", "must be > 0")
        if self.n_sensors < 1:
            raise ConfigError("n_sensors", "must be >= 1")
        if not self.sink_positions:
            raise ConfigError("sink_positions", "at least one sink required")
        for i, pos in enumerate(self.sink_positions):
            x, y = pos
            if not (0 <= x <= self.area_width and 0 <= y <= self.area_height):
                raise ConfigError(
                    "sink_positions", f"sink {i} at {pos} lies outside the area"
                )
        if not self.power_level_ranges:
            raise ConfigError("power_level_ranges", "at least one level required")
        for r in self.power_level_ranges:
            if not (RANGE_MIN <= r <= RANGE_MAX):
                raise ConfigError(
                    "power_level_ranges",
                    f"range {r} outside [{RANGE_MIN}, {RANGE_MAX}]",
                )
        if any(
            b <= a
            for a, b in zip(self.power_level_ranges, self.power_level_ranges[1:])
        ):
            raise ConfigError("power_level_ranges", "must be strictly increasing")
        if self.neighbor_limit < 1:
            raise ConfigError("neighbor_limit", "must be >= 1")
        if not 0 < self.selfish_threshold < 1:
            raise ConfigError("selfish_threshold", "must lie in (0, 1)")
        if not self.initial_energy > 0:
            raise ConfigError("initial_energy", "must be > 0")
        if self.packet_bits < 1:
            raise ConfigError("packet_bits", "must be >= 1")
        if self.e_elec < 0:
            raise ConfigError("e_elec", "must be >= 0")
        if self.eps_amp < 0:
            raise ConfigError("eps_amp", "must be >= 0")
        if not self.data_rate_kbps > 0:
            raise ConfigError("data_rate_kbps", "must be > 0")
        if self.snapshot_interval < 1:
            raise ConfigError("snapshot_interval", "must be >= 1")
        if self.max_rounds < 0:
            raise ConfigError("max_rounds", "must be >= 0")

    @property
    def max_range(self) -> float:
        return self.power_level_ranges[-1]

    def to_json_dict(self) -> dict:
        """Plain-JSON form used as the first line of a trace file."""
        return {
            "area_width": self.area_width,
            "area_height": self.area_height,
            "n_sensors": self.n_sensors,
            "sink_positions": [list(p) for p in self.sink_positions],
            "seed": self.seed,
            "initial_energy": self.initial_energy,
            "power_level_ranges": list(self.power_level_ranges),
            "neighbor_limit": self.neighbor_limit,
            "selfish_threshold": self.selfish_threshold,
            "packet_bits": self.packet_bits,
            "e_elec": self.e_elec,
            "eps_amp": self.eps_amp,
            "data_rate_kbps": self.data_rate_kbps,
            "snapshot_interval": self.snapshot_interval,
            "max_rounds": self.max_rounds,
        }


_INT_FIELDS = {
    "n_sensors",
    "seed",
    "neighbor_limit",
    "packet_bits",
    "snapshot_interval",
    "max_rounds",
}
_FLOAT_FIELDS = {
    "area_width",
    "area_height",
    "initial_energy",
    "selfish_threshold",
    "e_elec",
    "eps_amp",
    "data_rate_kbps",
}
_FIELD_NAMES = {f.name for f in fields(SimConfig)}


def config_from_dict(data: dict) -> SimConfig:
    """Build a :class:`SimConfig` from parsed TOML/JSON data.

    Unknown keys and wrong value types raise :class:`ConfigError`;
    missing keys keep their defaults.  The result is not validated so
    callers can report structural and semantic errors separately.
    """
    if not isinstance(data, dict):
        raise ConfigError("<root>", "expected a table/object of settings")
    kwargs: dict = {}
    for key, value in data.items():
        if key not in _FIELD_NAMES:
            raise ConfigError(key, "unknown setting")
        if key in _INT_FIELDS:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(key, f"expected an integer, got {value!r}")
            kwargs[key] = value
        elif key in _FLOAT_FIELDS:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(key, f"expected a number, got {value!r}")
            kwargs[key] = float(value)
        elif key == "power_level_ranges":
            try:
                kwargs[key] = tuple(float(v) for v in value)
            except (TypeError, ValueError):
                raise ConfigError(key, f"expected a list of numbers, got {value!r}")
        elif key == "sink_positions":
            try:
                positions = tuple((float(p[0]), float(p[1])) for p in value)
            except (TypeError, ValueError, IndexError):
                raise ConfigError(key, f"expected a list of [x, y] pairs, got {value!r}")
            if any(len(p) != 2 for p in value):
                raise ConfigError(key, "each entry must be an [x, y] pair")
            kwargs[key] = positions
    return SimConfig(**kwargs)


def load_config(path: str, *, seed: int | None = None) -> SimConfig:
    """Load and validate a TOML config file; ``seed`` overrides the file."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("<file>", f"not valid TOML: {exc}") from exc
    cfg = config_from_dict(data)
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    cfg.validate()
    return cfg
