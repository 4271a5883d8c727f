"""Graph-over-time model of a dying sensor network.

A trace is a sequence of directed topology snapshots of one simulated
deployment: sensors and sinks are nodes, and every (sensor -> next hop)
pair of the current routing tables is a link.  The node id set never
changes across a trace; a node that dies stays in later snapshots as an
isolate with mode ``dead``.

Traces serialize as JSON Lines (UTF-8, LF): the first line is the
config object, each following line one snapshot.  Floats are written in
Python's shortest round-trip decimal form, so read -> write reproduces
a file byte for byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .config import SimConfig, ConfigError, config_from_dict


class Role(str, Enum):
    SENSOR = "sensor"
    SINK = "sink"


class Mode(str, Enum):
    NORMAL = "normal"
    SELFISH = "selfish"
    DEAD = "dead"


class TraceError(ValueError):
    """Base class for trace file problems."""


class TraceFormatError(TraceError):
    """Malformed trace file; ``line`` is the 1-based offending line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"trace line {line}: {message}")
        self.line = line


class TraceValidationError(TraceError):
    """Structurally parseable trace that violates a model invariant."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


@dataclass(frozen=True)
class NodeRecord:
    """One node at one instant: identity, placement, residual energy, mode."""

    id: int
    role: Role
    x: float
    y: float
    energy: float
    mode: Mode


@dataclass(frozen=True)
class GraphSnapshot:
    """Directed topology at time ``t`` (a round index)."""

    t: int
    nodes: tuple[NodeRecord, ...]
    links: tuple[tuple[int, int], ...]

    def node_ids(self) -> list[int]:
        return [n.id for n in self.nodes]

    def sensor_ids(self) -> list[int]:
        return [n.id for n in self.nodes if n.role is Role.SENSOR]

    def sink_ids(self) -> list[int]:
        return [n.id for n in self.nodes if n.role is Role.SINK]

    def node_by_id(self) -> dict[int, NodeRecord]:
        return {n.id: n for n in self.nodes}

    def out_adjacency(self) -> dict[int, list[int]]:
        """Successor lists for every node id, sorted for determinism."""
        adj: dict[int, list[int]] = {n.id: [] for n in self.nodes}
        for src, dst in self.links:
            adj[src].append(dst)
        for lst in adj.values():
            lst.sort()
        return adj

    def in_adjacency(self) -> dict[int, list[int]]:
        """Predecessor lists for every node id, sorted for determinism."""
        adj: dict[int, list[int]] = {n.id: [] for n in self.nodes}
        for src, dst in self.links:
            adj[dst].append(src)
        for lst in adj.values():
            lst.sort()
        return adj


def snapshot_validate(
    snapshot: GraphSnapshot,
    *,
    area: tuple[float, float] | None = None,
    neighbor_limit: int | None = None,
) -> list[str]:
    """Check one snapshot's invariants; returns a list of violations.

    ``area`` enables the position-bounds check and ``neighbor_limit``
    the out-degree cap (both known only to callers holding the config).
    An empty list means the snapshot is valid.
    """
    violations: list[str] = []
    seen_ids: set[int] = set()
    by_id: dict[int, NodeRecord] = {}
    for node in snapshot.nodes:
        if node.id in seen_ids:
            violations.append(f"duplicate node id {node.id}")
        seen_ids.add(node.id)
        by_id[node.id] = node
        if node.role is Role.SENSOR and node.energy < 0:
            violations.append(f"node {node.id} has negative energy {node.energy}")
        if node.role is Role.SINK and node.mode is not Mode.NORMAL:
            violations.append(f"sink {node.id} has mode {node.mode.value}")
        if not (math.isfinite(node.x) and math.isfinite(node.y)):
            violations.append(f"node {node.id} has non-finite position")
        elif area is not None:
            width, height = area
            if not (0 <= node.x <= width and 0 <= node.y <= height):
                violations.append(
                    f"node {node.id} at ({node.x}, {node.y}) outside the area"
                )

    seen_links: set[tuple[int, int]] = set()
    out_deg: dict[int, int] = {}
    for link in snapshot.links:
        src, dst = link
        if link in seen_links:
            violations.append(f"duplicate link {link}")
        seen_links.add(link)
        if src == dst:
            violations.append(f"self-link on node {src}")
        missing = [v for v in link if v not in by_id]
        if missing:
            violations.append(f"link {link} references unknown node {missing[0]}")
            continue
        if by_id[src].role is not Role.SENSOR:
            violations.append(f"link {link} does not originate at a sensor")
        for endpoint in link:
            if by_id[endpoint].mode is Mode.DEAD:
                violations.append(f"link {link} touches dead node {endpoint}")
        out_deg[src] = out_deg.get(src, 0) + 1
    if neighbor_limit is not None:
        for node_id, deg in sorted(out_deg.items()):
            if deg > neighbor_limit:
                violations.append(
                    f"node {node_id} has out-degree {deg} > limit {neighbor_limit}"
                )
    return violations


@dataclass(frozen=True)
class TemporalTrace:
    """A config plus the snapshots one run of it produced."""

    config: SimConfig
    snapshots: tuple[GraphSnapshot, ...]

    def validate(self) -> list[str]:
        """Trace-level invariants plus every snapshot's own checks."""
        violations: list[str] = []
        if not self.snapshots:
            violations.append("trace has no snapshots")
            return violations
        area = (self.config.area_width, self.config.area_height)
        first_ids = set(self.snapshots[0].node_ids())
        prev_t: int | None = None
        for snap in self.snapshots:
            if prev_t is not None and snap.t <= prev_t:
                violations.append(
                    f"snapshot t={snap.t} does not increase over t={prev_t}"
                )
            prev_t = snap.t
            if set(snap.node_ids()) != first_ids:
                violations.append(f"snapshot t={snap.t} changes the node id set")
            for v in snapshot_validate(
                snap, area=area, neighbor_limit=self.config.neighbor_limit
            ):
                violations.append(f"t={snap.t}: {v}")
        return violations


def _node_to_json(node: NodeRecord) -> dict:
    return {
        "id": node.id,
        "role": node.role.value,
        "x": node.x,
        "y": node.y,
        "energy": node.energy,
        "mode": node.mode.value,
    }


def snapshot_to_json(snapshot: GraphSnapshot) -> dict:
    return {
        "t": snapshot.t,
        "nodes": [_node_to_json(n) for n in snapshot.nodes],
        "links": [list(link) for link in snapshot.links],
    }


def _require(data: dict, key: str, line: int):
    if key not in data:
        raise TraceFormatError(line, f"missing key {key!r}")
    return data[key]


def _node_from_json(data: dict, line: int) -> NodeRecord:
    if not isinstance(data, dict):
        raise TraceFormatError(line, f"node entry is not an object: {data!r}")
    try:
        role = Role(_require(data, "role", line))
        mode = Mode(_require(data, "mode", line))
    except ValueError as exc:
        raise TraceFormatError(line, str(exc)) from exc
    node_id = _require(data, "id", line)
    if isinstance(node_id, bool) or not isinstance(node_id, int):
        raise TraceFormatError(line, f"node id must be an integer: {node_id!r}")
    coords = []
    for key in ("x", "y", "energy"):
        value = _require(data, key, line)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise TraceFormatError(line, f"node {key} must be a number: {value!r}")
        coords.append(float(value))
    return NodeRecord(node_id, role, coords[0], coords[1], coords[2], mode)


def snapshot_from_json(data: dict, line: int = 0) -> GraphSnapshot:
    if not isinstance(data, dict):
        raise TraceFormatError(line, "snapshot line is not an object")
    t = _require(data, "t", line)
    if isinstance(t, bool) or not isinstance(t, int):
        raise TraceFormatError(line, f"snapshot t must be an integer: {t!r}")
    nodes = tuple(_node_from_json(n, line) for n in _require(data, "nodes", line))
    links = []
    for entry in _require(data, "links", line):
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise TraceFormatError(line, f"link entry must be a [src, dst] pair: {entry!r}")
        src, dst = entry
        for v in (src, dst):
            if isinstance(v, bool) or not isinstance(v, int):
                raise TraceFormatError(line, f"link endpoint must be an integer: {v!r}")
        links.append((src, dst))
    return GraphSnapshot(t=t, nodes=nodes, links=tuple(links))


def trace_to_lines(trace: TemporalTrace) -> Iterable[str]:
    """Serialize a trace to JSON Lines (without trailing newlines)."""
    yield json.dumps(trace.config.to_json_dict(), separators=(",", ":"))
    for snap in trace.snapshots:
        yield json.dumps(snapshot_to_json(snap), separators=(",", ":"))


def trace_write(trace: TemporalTrace, path: str) -> None:
    """Write a trace file (UTF-8, LF line endings, newline-terminated)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in trace_to_lines(trace):
            fh.write(line)
            fh.write("\n")


def trace_from_lines(lines: Iterable[str], *, validate: bool = True) -> TemporalTrace:
    """Parse trace lines (config first, then one snapshot per line).

    Raises :class:`TraceFormatError` for malformed lines (naming the
    line number) and :class:`TraceValidationError` when the parsed
    trace violates an invariant.
    """
    snapshots: list[GraphSnapshot] = []
    config: SimConfig | None = None
    for line_no, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise TraceFormatError(line_no, f"not valid JSON: {exc}") from exc
        if config is None:
            try:
                config = config_from_dict(data)
            except ConfigError as exc:
                raise TraceFormatError(line_no, str(exc)) from exc
        else:
            snapshots.append(snapshot_from_json(data, line_no))
    if config is None:
        raise TraceFormatError(1, "empty input; expected a config line")
    trace = TemporalTrace(config=config, snapshots=tuple(snapshots))
    if validate:
        violations = trace.validate()
        if violations:
            raise TraceValidationError(violations)
    return trace


def trace_read(path: str, *, validate: bool = True) -> TemporalTrace:
    """Parse a trace file; see :func:`trace_from_lines`."""
    with open(path, "r", encoding="utf-8") as fh:
        return trace_from_lines(fh, validate=validate)
