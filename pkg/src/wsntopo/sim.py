"""Round-based lifetime simulation of a multi-hop sensor network.

Sensors are deployed uniformly at random, build energy-wise least-cost
routes to the sinks (distributed Bellman-Ford fixed point), and then
forward one sensed packet per alive sensor per round.  Next hops are
drawn from the routing table with probability inversely proportional to
the candidate's energy-wise distance to the sink, except that an
in-range sink is always taken directly.

Radio energy follows the first-order model: transmitting one bit over a
power level with range ``r`` costs ``e_elec + eps_amp * r**2``; the
receiving sensor pays ``e_elec`` per bit.  The transmitter charges the
range of the *level*, not the geometric distance, because power levels
are discrete.

A sensor whose normalized residual energy falls below the selfish
threshold stops relaying (it keeps sending its own data) and announces
the change with a single maximum-power broadcast.  A sensor reaching
zero energy is dead: it drops anything it was about to forward and
disappears from the topology except as an isolate.  Route recomputation
itself costs nothing beyond that broadcast.

Everything is deterministic given the config seed: deployment, hop
sampling, tie-breaks (always the smallest node id), and therefore the
emitted trace bytes.
"""

from __future__ import annotations

import heapq
import json
import logging
import math
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .config import SimConfig
from .model import GraphSnapshot, Mode, NodeRecord, Role, TemporalTrace

log = logging.getLogger(__name__)


class OutOfRangeError(ValueError):
    """Distance exceeds the largest configured power level."""


class NoRouteError(ValueError):
    """A next-hop draw was requested with no candidates."""


def sink_ids(config: SimConfig) -> range:
    """Sink node ids: allocated right after the sensors (0..n_sensors-1)."""
    return range(config.n_sensors, config.n_sensors + len(config.sink_positions))


def deploy(
    config: SimConfig, rng: random.Random | None = None
) -> dict[int, tuple[float, float]]:
    """Draw sensor positions, id -> (x, y), ids 0..n_sensors-1.

    Positions are i.i.d. uniform over the area, drawn x-then-y in
    ascending id order from the seeded generator, so a given seed always
    yields the same deployment.
    """
    if rng is None:
        rng = random.Random(config.seed)
    return {
        i: (rng.uniform(0.0, config.area_width), rng.uniform(0.0, config.area_height))
        for i in range(config.n_sensors)
    }


def link_cost(distance: float, config: SimConfig) -> tuple[float, int]:
    """Per-bit cost and power level index for one hop of ``distance`` metres.

    The level is the smallest configured range covering the distance;
    the cost charges that range squared (discrete power control).
    Raises :class:`OutOfRangeError` beyond the largest level.
    """
    for level, r in enumerate(config.power_level_ranges):
        if distance <= r:
            return config.e_elec + config.eps_amp * r * r, level
    raise OutOfRangeError(
        f"distance {distance} exceeds max range {config.power_level_ranges[-1]}"
    )


def packet_tx_cost(config: SimConfig, level: int) -> float:
    """Energy to transmit one packet at a given power level."""
    r = config.power_level_ranges[level]
    return (config.e_elec + config.eps_amp * r * r) * config.packet_bits


def packet_rx_cost(config: SimConfig) -> float:
    """Energy a sensor pays to receive one packet."""
    return config.e_elec * config.packet_bits


def broadcast_cost(config: SimConfig) -> float:
    """Energy of the one-off maximum-power announcement when turning selfish."""
    return packet_tx_cost(config, len(config.power_level_ranges) - 1)


@dataclass(frozen=True, slots=True)
class NextHop:
    """One routing-table entry: neighbor id, power level, selection probability."""

    neighbor: int
    level: int
    probability: float


@dataclass(frozen=True, slots=True)
class RouteEntry:
    """Energy-wise distance to the nearest sink plus the ranked next hops."""

    cost: float
    next_hops: tuple[NextHop, ...]


def bpr_probabilities(candidates: Sequence[tuple[int, float]]) -> tuple[float, ...]:
    """Selection probabilities over (neighbor id, neighbor cost-to-sink) pairs.

    Probability is proportional to 1/cost.  A zero-cost candidate is a
    sink: the lowest-id sink gets probability 1 and everything else 0,
    which is the limit of the rule and keeps it well defined.
    """
    if not candidates:
        raise NoRouteError("no next-hop candidates")
    sinks = [nid for nid, cost in candidates if cost == 0.0]
    if sinks:
        chosen = min(sinks)
        return tuple(1.0 if nid == chosen else 0.0 for nid, _ in candidates)
    weights = [1.0 / cost for _, cost in candidates]
    total = sum(weights)
    return tuple(w / total for w in weights)


def setup_phase(
    positions: Mapping[int, tuple[float, float]],
    config: SimConfig,
    *,
    selfish: frozenset[int] | set[int] = frozenset(),
    dead: frozenset[int] | set[int] = frozenset(),
) -> dict[int, RouteEntry]:
    """Compute every node's cost to the nearest sink and its next-hop table.

    ``positions`` maps sensor ids to coordinates; sinks come from the
    config (ids following the sensors).  Relays are sinks and NORMAL
    sensors only: selfish sensors still appear as sources (they get a
    cost and next hops) and dead sensors are omitted entirely.

    The costs are the fixed point of distributed Bellman-Ford on
    per-packet link costs; with positive costs Dijkstra from the sink
    side reaches the same fixed point.  ``next_hops`` holds the at most
    ``neighbor_limit`` in-range candidates with strictly smaller cost,
    ranked by total cost through them, ties broken by smaller id.
    """
    bits = config.packet_bits
    max_r = config.max_range
    sinks = dict(zip(sink_ids(config), config.sink_positions))
    overlap = sinks.keys() & positions.keys()
    if overlap:
        raise ValueError(f"sensor ids collide with sink ids: {sorted(overlap)}")
    alive = {i: p for i, p in positions.items() if i not in dead}
    usable = set(sinks) | {i for i in alive if i not in selfish}
    pos_all = {**alive, **sinks}

    dist: dict[int, float] = {i: math.inf for i in alive}
    dist.update({sid: 0.0 for sid in sinks})
    heap: list[tuple[float, int]] = [(0.0, sid) for sid in sorted(sinks)]
    settled: set[int] = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in settled:
            continue
        settled.add(u)
        if u not in usable:
            continue  # selfish: its own cost is final but nobody routes through it
        ux, uy = pos_all[u]
        for w, (wx, wy) in alive.items():
            if w in settled:
                continue
            span = math.hypot(wx - ux, wy - uy)
            if span > max_r:
                continue
            per_bit, _ = link_cost(span, config)
            nd = d + per_bit * bits
            if nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))

    table: dict[int, RouteEntry] = {sid: RouteEntry(0.0, ()) for sid in sorted(sinks)}
    for i in sorted(alive):
        ix, iy = alive[i]
        ranked: list[tuple[float, int, int]] = []
        for v in usable:
            if v == i or not dist[v] < dist[i]:
                continue
            span = math.hypot(pos_all[v][0] - ix, pos_all[v][1] - iy)
            if span > max_r:
                continue
            per_bit, level = link_cost(span, config)
            ranked.append((per_bit * bits + dist[v], v, level))
        ranked.sort(key=lambda item: (item[0], item[1]))
        top = ranked[: config.neighbor_limit]
        if top:
            probs = bpr_probabilities([(v, dist[v]) for _, v, _ in top])
            hops = tuple(
                NextHop(v, level, p) for (_, v, level), p in zip(top, probs)
            )
        else:
            hops = ()
        table[i] = RouteEntry(dist[i], hops)
    return table


@dataclass(frozen=True, slots=True)
class Event:
    """One entry of the per-round event log.

    ``kind`` is tx, rx, selfish, dead, deliver, or drop.  ``energy`` is
    the amount actually debited by this entry (tx/rx/selfish), so the
    sum over a run's events equals the total energy drawn from the
    network.
    """

    round: int
    kind: str
    node: int
    energy: float = 0.0
    peer: int | None = None
    origin: int | None = None
    reason: str | None = None
    hops: int | None = None


def event_to_json(event: Event) -> dict:
    detail: dict = {}
    if event.kind in ("tx", "rx", "selfish"):
        detail["energy"] = event.energy
    for key in ("peer", "origin", "reason", "hops"):
        value = getattr(event, key)
        if value is not None:
            detail[key] = value
    return {
        "round": event.round,
        "kind": event.kind,
        "node": event.node,
        "detail": detail,
    }


def events_write(events: Iterable[Event], path: str) -> None:
    """Write an event log as JSON Lines (one event per line)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for event in events:
            fh.write(json.dumps(event_to_json(event), separators=(",", ":")))
            fh.write("\n")


class _SensorState:
    __slots__ = ("pos", "energy", "mode")

    def __init__(self, pos: tuple[float, float], energy: float):
        self.pos = pos
        self.energy = energy
        self.mode = Mode.NORMAL


class Simulation:
    """Stateful engine behind :func:`simulate`; exposes per-round stepping.

    The full event log accumulates in :attr:`events`; snapshots can be
    taken at any point between rounds.
    """

    def __init__(self, config: SimConfig):
        config.validate()
        self.config = config
        self.rng = random.Random(config.seed)
        self.positions = deploy(config, self.rng)
        self.sinks = dict(zip(sink_ids(config), config.sink_positions))
        self.round = 0
        self.states = {
            i: _SensorState(pos, config.initial_energy)
            for i, pos in self.positions.items()
        }
        self.events: list[Event] = []
        self._recompute()

    # -- state inspection ------------------------------------------------

    def any_routed(self) -> bool:
        """True while some alive sensor still has a route to a sink."""
        return any(
            st.mode is not Mode.DEAD and self.table[i].next_hops
            for i, st in self.states.items()
        )

    def snapshot(self) -> GraphSnapshot:
        nodes = [
            NodeRecord(i, Role.SENSOR, st.pos[0], st.pos[1], st.energy, st.mode)
            for i, st in sorted(self.states.items())
        ]
        nodes += [
            NodeRecord(sid, Role.SINK, x, y, 0.0, Mode.NORMAL)
            for sid, (x, y) in sorted(self.sinks.items())
        ]
        links = [
            (i, hop.neighbor)
            for i in sorted(self.positions)
            if i in self.table
            for hop in self.table[i].next_hops
        ]
        return GraphSnapshot(t=self.round, nodes=tuple(nodes), links=tuple(links))

    # -- dynamics ---------------------------------------------------------

    def _recompute(self) -> None:
        selfish = {i for i, st in self.states.items() if st.mode is Mode.SELFISH}
        dead = {i for i, st in self.states.items() if st.mode is Mode.DEAD}
        self.table = setup_phase(
            self.positions, self.config, selfish=selfish, dead=dead
        )

    def _spend(
        self,
        rnd: int,
        node: int,
        amount: float,
        kind: str,
        *,
        peer: int | None = None,
        origin: int | None = None,
    ) -> tuple[bool, list[Event]]:
        """Debit ``amount`` from ``node``; returns (fully paid, events).

        Underfunded operations drain the node and fail.  Crossing the
        selfish threshold fires the one-off max-power broadcast, which
        may itself drain the node to death.
        """
        cfg = self.config
        st = self.states[node]
        actual = amount if amount <= st.energy else st.energy
        st.energy -= actual
        ok = actual == amount
        evs = [Event(rnd, kind, node, energy=actual, peer=peer, origin=origin)]
        if st.energy <= 0.0:
            st.energy = 0.0
            st.mode = Mode.DEAD
            evs.append(Event(rnd, "dead", node))
            return ok, evs
        if (
            st.mode is Mode.NORMAL
            and st.energy / cfg.initial_energy < cfg.selfish_threshold
        ):
            st.mode = Mode.SELFISH
            announce = broadcast_cost(cfg)
            b_actual = announce if announce <= st.energy else st.energy
            st.energy -= b_actual
            evs.append(Event(rnd, "selfish", node, energy=b_actual))
            if st.energy <= 0.0:
                st.energy = 0.0
                st.mode = Mode.DEAD
                evs.append(Event(rnd, "dead", node))
        return ok, evs

    def _sample_hop(self, next_hops: tuple[NextHop, ...]) -> NextHop:
        draw = self.rng.random()
        acc = 0.0
        for hop in next_hops:
            acc += hop.probability
            if draw < acc:
                return hop
        return next_hops[-1]

    def run_round(self) -> list[Event]:
        """Advance one round: every alive sensor originates one packet."""
        cfg = self.config
        self.round += 1
        rnd = self.round
        events: list[Event] = []
        pending = False  # table recompute owed before the next packet
        for origin in sorted(self.positions):
            if self.states[origin].mode is Mode.DEAD:
                continue
            if pending:
                self._recompute()
                pending = False
            entry = self.table.get(origin)
            if entry is None or not entry.next_hops:
                events.append(Event(rnd, "drop", origin, origin=origin, reason="no_route"))
                continue
            holder = origin
            hops = 0
            while True:
                hop = self._sample_hop(self.table[holder].next_hops)
                ok, evs = self._spend(
                    rnd, holder, packet_tx_cost(cfg, hop.level), "tx",
                    peer=hop.neighbor, origin=origin,
                )
                events.extend(evs)
                pending = pending or len(evs) > 1
                if not ok:
                    events.append(
                        Event(rnd, "drop", holder, origin=origin, reason="sender_died")
                    )
                    break
                hops += 1
                if hop.neighbor in self.sinks:
                    events.append(
                        Event(rnd, "deliver", origin, peer=hop.neighbor,
                              origin=origin, hops=hops)
                    )
                    break
                ok, evs = self._spend(
                    rnd, hop.neighbor, packet_rx_cost(cfg), "rx",
                    peer=holder, origin=origin,
                )
                events.extend(evs)
                pending = pending or len(evs) > 1
                if not ok or self.states[hop.neighbor].mode is Mode.DEAD:
                    events.append(
                        Event(rnd, "drop", hop.neighbor, origin=origin,
                              reason="receiver_died")
                    )
                    break
                # A receiver that just turned selfish still forwards this
                # packet: the ban is on being selected from now on.
                holder = hop.neighbor
        if pending:
            self._recompute()
        self.events.extend(events)
        return events

    def run(self) -> TemporalTrace:
        """Run to network death (or the round cap) and collect the trace."""
        cfg = self.config
        snapshots = [self.snapshot()]
        while self.round < cfg.max_rounds and self.any_routed():
            self.run_round()
            if self.round % cfg.snapshot_interval == 0:
                snapshots.append(self.snapshot())
        if snapshots[-1].t != self.round:
            snapshots.append(self.snapshot())
        log.info(
            "simulation finished: seed=%d rounds=%d events=%d",
            cfg.seed, self.round, len(self.events),
        )
        return TemporalTrace(config=cfg, snapshots=tuple(snapshots))


def simulate(config: SimConfig) -> TemporalTrace:
    """Run one seeded simulation; deterministic down to the trace bytes."""
    return Simulation(config).run()
