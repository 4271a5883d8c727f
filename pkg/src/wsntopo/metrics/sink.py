"""Sink-centric measures: reachability, hop distance, and gateway load.

These treat the snapshot as a routing structure rather than a plain
graph: what matters is whether and how sensors can reach a sink.

Sink-betweenness of a sensor v is the average, over all other sensors s
that can reach a sink, of the fraction of s's shortest paths to its
*nearest* sink(s) that pass through v (v strictly interior).  Paths to
equidistant sinks pool into one count.  The value is 1 exactly when
every such path crosses v, e.g. for the last sensor directly connected
to a sink.  Sinks themselves have no sink-betweenness.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from ..model import GraphSnapshot, Role
from .classic import FunctionSamples, Histogram, fixed_histogram, integer_histogram


@dataclass(frozen=True)
class SinkConnectedSet:
    """Node ids with a directed path to some sink (sinks included), at time t."""

    t: int
    members: frozenset[int]


def _sink_ids(s: GraphSnapshot) -> list[int]:
    sinks = s.sink_ids()
    if not sinks:
        raise ValueError(f"snapshot t={s.t} has no sink")
    return sinks


def sink_connected(s: GraphSnapshot) -> SinkConnectedSet:
    """Reverse multi-source BFS from the sinks over link direction."""
    sinks = _sink_ids(s)
    in_adj = s.in_adjacency()
    members: set[int] = set(sinks)
    queue = deque(sinks)
    while queue:
        v = queue.popleft()
        for w in in_adj[v]:
            if w not in members:
                members.add(w)
                queue.append(w)
    return SinkConnectedSet(t=s.t, members=frozenset(members))


def density_connected(s: GraphSnapshot) -> float | None:
    """Directed density of the sink-connected component (None below 2 nodes)."""
    members = sink_connected(s).members
    n_c = len(members)
    if n_c < 2:
        return None
    m_c = sum(1 for src, dst in s.links if src in members and dst in members)
    return m_c / (n_c * (n_c - 1))


def sink_distances(s: GraphSnapshot) -> dict[int, int]:
    """Minimum hops to the nearest sink for every node that has a path.

    Sinks are at distance 0.  Nodes without a path are absent (their
    distance is infinite).
    """
    sinks = _sink_ids(s)
    in_adj = s.in_adjacency()
    dist: dict[int, int] = {sid: 0 for sid in sinks}
    queue = deque(sinks)
    while queue:
        v = queue.popleft()
        for w in in_adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def sink_distance(s: GraphSnapshot, node_id: int) -> float:
    """Hops from one node to its nearest sink (inf when unreachable)."""
    return float(sink_distances(s).get(node_id, math.inf))


def _finite_sensor_distances(s: GraphSnapshot) -> list[int]:
    dist = sink_distances(s)
    return [dist[n.id] for n in s.nodes if n.role is Role.SENSOR and n.id in dist]


def sink_radius(s: GraphSnapshot) -> int | None:
    """Largest finite sensor-to-sink distance (None when nothing reaches)."""
    finite = _finite_sensor_distances(s)
    return max(finite) if finite else None


def avg_sink_distance(s: GraphSnapshot) -> float | None:
    """Mean sensor-to-sink distance over sensors that reach a sink."""
    finite = _finite_sensor_distances(s)
    return sum(finite) / len(finite) if finite else None


def sink_distance_distribution(s: GraphSnapshot) -> Histogram:
    """Width-1 histogram of finite sensor-to-sink distances."""
    return integer_histogram(_finite_sensor_distances(s))


def _sb_all(s: GraphSnapshot) -> dict[int, float]:
    """Sink-betweenness for every sensor (0.0 when off all paths)."""
    sink_set = set(_sink_ids(s))
    out_adj = s.out_adjacency()
    sensors = s.sensor_ids()
    contrib = dict.fromkeys(sensors, 0.0)

    routed: list[int] = []  # sensors with a finite sink distance
    per_source: list[tuple[int, dict[int, float]]] = []
    for source in sensors:
        # Forward BFS: hop distance and shortest-path counts from source.
        dist = {source: 0}
        sigma = {source: 1}
        order = [source]
        queue = deque([source])
        while queue:
            v = queue.popleft()
            if v in sink_set:
                continue  # sinks absorb; paths never continue through them
            for w in out_adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    sigma[w] = 0
                    queue.append(w)
                    order.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        reached = [k for k in sink_set if k in dist]
        if not reached:
            continue
        routed.append(source)
        nearest = min(dist[k] for k in reached)
        targets = {k for k in reached if dist[k] == nearest}
        sigma_total = sum(sigma[k] for k in targets)
        # Backward pass: count shortest completions into the nearest sinks.
        beta = dict.fromkeys(order, 0)
        for k in targets:
            beta[k] = 1
        for v in reversed(order):
            if v in targets or dist[v] >= nearest:
                continue
            acc = 0
            for w in out_adj[v]:
                if w in dist and dist[w] == dist[v] + 1:
                    acc += beta[w]
            beta[v] = acc
        shares: dict[int, float] = {}
        for v in order:
            if v == source or v in sink_set:
                continue
            if 0 < dist[v] < nearest and sigma[v] and beta[v]:
                shares[v] = (sigma[v] * beta[v]) / sigma_total
        per_source.append((source, shares))

    routed_set = set(routed)
    n_routed = len(routed)
    totals = dict.fromkeys(sensors, 0.0)
    for _, shares in per_source:
        for v, share in shares.items():
            totals[v] += share
    sb: dict[int, float] = {}
    for v in sensors:
        denom = n_routed - (1 if v in routed_set else 0)
        sb[v] = totals[v] / denom if denom > 0 else 0.0
    return sb


def sink_betweenness(s: GraphSnapshot, node_id: int | None = None):
    """Sink-betweenness of one sensor, or of all sensors as a dict.

    Raises ValueError for a sink or unknown id when ``node_id`` given.
    """
    sb = _sb_all(s)
    if node_id is None:
        return sb
    if node_id not in sb:
        raise ValueError(f"node {node_id} is not a sensor of this snapshot")
    return sb[node_id]


@dataclass(frozen=True)
class SinkBetweennessSummary:
    """Aggregates of one snapshot's sink-betweenness over its sensors."""

    maximum: float | None
    mean: float | None
    histogram: Histogram | None
    by_degree: FunctionSamples | None
    neighbor_pairs: tuple[tuple[float, float], ...] | None


def sink_betweenness_functions(s: GraphSnapshot) -> SinkBetweennessSummary:
    """Max, mean, 20-bin histogram, <sb>_k, and raw (sb, sb_nn) pairs.

    Degree groups use ALL-degree in the full snapshot; neighbor means
    run over sensor neighbors only (sinks carry no sink-betweenness).
    """
    sensors = s.sensor_ids()
    if not sensors:
        return SinkBetweennessSummary(None, None, None, None, None)
    sb = _sb_all(s)
    out_adj = s.out_adjacency()
    in_adj = s.in_adjacency()
    values = [sb[v] for v in sensors]
    maximum = max(values)
    mean = sum(values) / len(values)
    histogram = fixed_histogram(values, 20, 0.0, maximum)
    deg = {
        i: len(out_adj[i]) + len(in_adj[i])
        for i in s.node_ids()
    }
    groups: dict[int, list[float]] = {}
    for v in sensors:
        groups.setdefault(deg[v], []).append(sb[v])
    by_degree = FunctionSamples(
        points=tuple(
            (float(k), sum(g) / len(g), len(g)) for k, g in sorted(groups.items())
        )
    )
    sensor_set = set(sensors)
    pairs = []
    for v in sensors:
        neighbors = (set(out_adj[v]) | set(in_adj[v])) & sensor_set
        if not neighbors:
            continue
        pairs.append((sb[v], sum(sb[w] for w in neighbors) / len(neighbors), v))
    pairs.sort()
    neighbor_pairs = tuple((x, y) for x, y, _ in pairs)
    return SinkBetweennessSummary(maximum, mean, histogram, by_degree, neighbor_pairs)
