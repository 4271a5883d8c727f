import json
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wsntopo.config import SimConfig
from wsntopo.model import Mode, Role, trace_to_lines
from wsntopo.sim import (
    NoRouteError,
    OutOfRangeError,
    Simulation,
    bpr_probabilities,
    broadcast_cost,
    deploy,
    events_write,
    link_cost,
    packet_rx_cost,
    packet_tx_cost,
    setup_phase,
    sink_ids,
)

from . import oracles


def test_link_cost_levels():
    cfg = SimConfig()
    assert link_cost(12.5, cfg) == (6.5625e-8, 0)
    assert link_cost(50.0, cfg) == (3.0e-7, 3)
    # level boundary is inclusive; just past it costs the next level
    assert link_cost(12.5000001, cfg)[1] == 1
    assert link_cost(0.0, cfg) == (6.5625e-8, 0)
    with pytest.raises(OutOfRangeError):
        link_cost(50.1, cfg)


def test_packet_costs():
    cfg = SimConfig()
    assert packet_tx_cost(cfg, 0) == pytest.approx(6.5625e-5)
    assert packet_tx_cost(cfg, 3) == pytest.approx(3.0e-4)
    assert packet_rx_cost(cfg) == pytest.approx(5.0e-5)
    assert broadcast_cost(cfg) == packet_tx_cost(cfg, 3)


def test_sink_ids_follow_sensors():
    cfg = SimConfig(n_sensors=5, sink_positions=((50.0, 50.0), (10.0, 10.0)))
    assert list(sink_ids(cfg)) == [5, 6]


def test_deploy_deterministic_and_in_area():
    cfg = SimConfig(seed=11, n_sensors=40)
    a = deploy(cfg)
    b = deploy(cfg)
    assert a == b
    assert deploy(SimConfig(seed=12, n_sensors=40)) != a
    for x, y in a.values():
        assert 0.0 <= x <= cfg.area_width
        assert 0.0 <= y <= cfg.area_height


def test_deploy_mean_is_central():
    cfg = SimConfig(seed=1, n_sensors=10_000)
    pos = deploy(cfg)
    mean_x = sum(x for x, _ in pos.values()) / len(pos)
    mean_y = sum(y for _, y in pos.values()) / len(pos)
    assert abs(mean_x - 50.0) < 1.0
    assert abs(mean_y - 50.0) < 1.0


def test_bpr_examples():
    assert bpr_probabilities([(1, 2.0e-4), (2, 2.0e-4)]) == (0.5, 0.5)
    assert bpr_probabilities([(1, 1.0e-4), (2, 3.0e-4)]) == (0.75, 0.25)
    # a reachable sink short-circuits the draw
    assert bpr_probabilities([(7, 1.0e-4), (9, 0.0)]) == (0.0, 1.0)
    assert bpr_probabilities([(9, 0.0), (8, 0.0)]) == (0.0, 1.0)
    with pytest.raises(NoRouteError):
        bpr_probabilities([])


@settings(max_examples=80)
@given(
    st.lists(
        st.floats(min_value=1e-6, max_value=1.0, allow_nan=False),
        min_size=1,
        max_size=6,
    )
)
def test_bpr_is_a_distribution(costs):
    probs = bpr_probabilities(list(enumerate(costs)))
    assert sum(probs) == pytest.approx(1.0)
    assert all(p > 0 for p in probs)
    # p proportional to 1/cost means p*cost is constant
    for (pa, ca), (pb, cb) in zip(zip(probs, costs), zip(probs[1:], costs[1:])):
        assert pa * ca == pytest.approx(pb * cb, rel=1e-9)


def test_setup_single_sensor():
    cfg = SimConfig(n_sensors=1, sink_positions=((0.0, 0.0),))
    table = setup_phase({0: (10.0, 0.0)}, cfg)
    assert table[0].cost == pytest.approx(6.5625e-5)
    assert [h.neighbor for h in table[0].next_hops] == [1]
    assert table[0].next_hops[0].probability == 1.0
    assert table[1].cost == 0.0


def test_setup_two_hop_chain():
    cfg = SimConfig(n_sensors=2, sink_positions=((0.0, 0.0),))
    table = setup_phase({0: (40.0, 0.0), 1: (80.0, 0.0)}, cfg)
    assert table[0].cost == pytest.approx(3.0e-4)
    assert table[1].cost == pytest.approx(6.0e-4)
    assert [h.neighbor for h in table[1].next_hops] == [0]


def test_setup_disconnected_sensor():
    cfg = SimConfig(n_sensors=1, sink_positions=((0.0, 0.0),))
    table = setup_phase({0: (60.0, 0.0)}, cfg)
    assert table[0].cost == math.inf
    assert table[0].next_hops == ()


def test_setup_ranking_and_sink_dominance():
    # D's cheapest candidates are two equal-cost relays (tie broken by
    # id), the sink ranks third, and the limit drops the fourth; but the
    # in-range sink takes all the probability regardless of rank.
    cfg = SimConfig(n_sensors=4, sink_positions=((0.0, 0.0),))
    table = setup_phase(
        {0: (12.0, 0.0), 1: (25.0, 0.0), 2: (24.0, 0.0), 3: (37.0, 0.0)}, cfg
    )
    hops = table[3].next_hops
    assert [h.neighbor for h in hops] == [0, 1, 4]
    assert [h.probability for h in hops] == [0.0, 0.0, 1.0]
    assert table[3].cost == pytest.approx(1.78125e-4)
    assert len(hops) <= cfg.neighbor_limit


def test_setup_selfish_is_source_not_relay():
    cfg = SimConfig(n_sensors=2, sink_positions=((0.0, 0.0),))
    positions = {0: (40.0, 0.0), 1: (80.0, 0.0)}
    table = setup_phase(positions, cfg, selfish={0})
    assert table[0].next_hops != ()  # still routes its own data
    assert table[1].cost == math.inf  # but relays for nobody
    assert table[1].next_hops == ()


def test_setup_dead_is_gone():
    cfg = SimConfig(n_sensors=2, sink_positions=((0.0, 0.0),))
    positions = {0: (40.0, 0.0), 1: (80.0, 0.0)}
    table = setup_phase(positions, cfg, dead={0})
    assert 0 not in table
    assert table[1].cost == math.inf


def test_setup_rejects_id_collision():
    cfg = SimConfig(n_sensors=1, sink_positions=((0.0, 0.0),))
    with pytest.raises(ValueError, match="collide"):
        setup_phase({1: (10.0, 0.0)}, cfg)


def test_setup_matches_relaxation_fixed_point():
    """Dijkstra-computed costs equal textbook Bellman-Ford relaxation."""
    rng = random.Random(99)
    for _ in range(100):
        n = rng.randint(1, 12)
        cfg = SimConfig(n_sensors=n, sink_positions=((50.0, 50.0),))
        positions = {
            i: (rng.uniform(0, 100), rng.uniform(0, 100)) for i in range(n)
        }
        table = setup_phase(positions, cfg)

        pos_all = dict(positions)
        pos_all[n] = (50.0, 50.0)
        edges = {}
        for u in range(n):
            for v in pos_all:
                if u == v:
                    continue
                d = math.dist(pos_all[u], pos_all[v])
                if d <= cfg.max_range:
                    per_bit, _ = link_cost(d, cfg)
                    edges[(u, v)] = per_bit * cfg.packet_bits
        want = oracles.bellman_ford_costs(edges, sinks={n})
        for i in range(n):
            got = table[i].cost
            expect = want.get(i, math.inf)
            if math.isinf(expect):
                assert math.isinf(got)
            else:
                assert got == pytest.approx(expect, rel=1e-12)
            # structural checks on the hop table
            hops = table[i].next_hops
            assert len(hops) <= cfg.neighbor_limit
            for h in hops:
                assert table[h.neighbor].cost < table[i].cost
                assert (
                    math.dist(pos_all[i], pos_all[h.neighbor]) <= cfg.max_range
                )


def chain_sim(**overrides) -> Simulation:
    """Two sensors in a forced 40 m / 80 m line to one sink at origin."""
    defaults = dict(
        n_sensors=2,
        sink_positions=((0.0, 0.0),),
        seed=1,
        selfish_threshold=1e-9,
    )
    defaults.update(overrides)
    sim = Simulation(SimConfig(**defaults))
    for i, pos in {0: (40.0, 0.0), 1: (80.0, 0.0)}.items():
        sim.positions[i] = pos
        sim.states[i].pos = pos
    sim._recompute()
    return sim


def test_round_relay_chain_accounting():
    sim = chain_sim(initial_energy=1.0)
    events = sim.run_round()
    kinds = [(e.kind, e.node) for e in events]
    # origin 0 goes direct; origin 1 relays through 0
    assert kinds == [
        ("tx", 0),
        ("deliver", 0),
        ("tx", 1),
        ("rx", 0),
        ("tx", 0),
        ("deliver", 1),
    ]
    assert sim.states[0].energy == pytest.approx(1.0 - 2 * 3.0e-4 - 5.0e-5)
    assert sim.states[1].energy == pytest.approx(1.0 - 3.0e-4)
    deliver = [e for e in events if e.kind == "deliver"]
    assert deliver[0].hops == 1
    assert deliver[1].hops == 2


def test_round_receiver_dies_and_drops():
    sim = chain_sim(initial_energy=1.0)
    sim.states[0].energy = 3.0e-4 + 2.0e-5  # own tx ok, relay rx underfunded
    events = sim.run_round()
    kinds = [(e.kind, e.node) for e in events]
    assert kinds == [
        ("tx", 0),
        ("deliver", 0),
        ("tx", 1),
        ("rx", 0),
        ("dead", 0),
        ("drop", 0),
    ]
    rx = events[3]
    assert rx.energy == pytest.approx(2.0e-5)  # partial spend only
    assert events[-1].reason == "receiver_died"
    assert sim.states[0].mode is Mode.DEAD
    assert sim.states[0].energy == 0.0


def test_round_sender_dies_mid_transmit():
    sim = chain_sim(initial_energy=1.0)
    sim.states[0].energy = 1.5e-4
    events = sim.run_round()
    assert [(e.kind, e.node) for e in events[:3]] == [
        ("tx", 0),
        ("dead", 0),
        ("drop", 0),
    ]
    assert events[2].reason == "sender_died"
    assert events[0].energy == pytest.approx(1.5e-4)
    # origin 1 lost its only relay; the recompute leaves it routeless
    assert events[3].kind == "drop"
    assert events[3].reason == "no_route"


def test_round_selfish_removes_in_links():
    sim = chain_sim(initial_energy=1.0, selfish_threshold=0.05)
    sim.states[0].energy = 0.0505
    sim.run_round()
    assert sim.states[0].mode is Mode.SELFISH
    snap = sim.snapshot()
    assert snap.in_adjacency()[0] == []
    assert snap.out_adjacency()[0] == [2]  # still originates
    assert snap.out_adjacency()[1] == []  # lost its relay
    events = sim.run_round()
    assert ("drop", 1) in [(e.kind, e.node) for e in events]


def test_round_fresh_selfish_still_forwards_in_flight_packet():
    # relay is id 1 here so the far sensor (id 0) originates first
    cfg = SimConfig(
        n_sensors=2, sink_positions=((0.0, 0.0),), seed=1, selfish_threshold=0.05
    )
    sim = Simulation(cfg)
    for i, pos in {0: (80.0, 0.0), 1: (40.0, 0.0)}.items():
        sim.positions[i] = pos
        sim.states[i].pos = pos
    sim._recompute()
    sim.states[1].energy = 0.05 + 4.0e-5  # rx tips it under the threshold
    events = sim.run_round()
    delivered = [e for e in events if e.kind == "deliver"]
    assert [e.origin for e in delivered] == [0, 1]
    assert delivered[0].hops == 2
    assert any(e.kind == "selfish" and e.node == 1 for e in events)
    assert sim.states[1].mode is Mode.SELFISH


def test_single_sensor_lifetime_ledger():
    # 10x10 area keeps the lone sensor in the lowest power band
    cfg = SimConfig(
        area_width=10.0,
        area_height=10.0,
        n_sensors=1,
        sink_positions=((5.0, 5.0),),
        seed=3,
        initial_energy=0.01,
        selfish_threshold=1e-9,
    )
    sim = Simulation(cfg)
    sim.run()
    deliveries = sum(1 for e in sim.events if e.kind == "deliver")
    assert deliveries == 152  # floor(0.01 / 6.5625e-5)


def test_single_sensor_ledger_with_default_threshold():
    # same setup under the 5% threshold: selfish at round 145, the
    # max-power announcement costs 3.0e-4, leaving exactly 2 more rounds
    cfg = SimConfig(
        area_width=10.0,
        area_height=10.0,
        n_sensors=1,
        sink_positions=((5.0, 5.0),),
        seed=3,
        initial_energy=0.01,
    )
    sim = Simulation(cfg)
    sim.run()
    deliveries = sum(1 for e in sim.events if e.kind == "deliver")
    selfish = [e for e in sim.events if e.kind == "selfish"]
    assert deliveries == 147
    assert [e.round for e in selfish] == [145]


def test_run_zero_rounds():
    cfg = SimConfig(n_sensors=5, seed=4, max_rounds=0)
    trace = Simulation(cfg).run()
    assert len(trace.snapshots) == 1
    assert trace.snapshots[0].t == 0


def test_run_terminates_routeless_with_empty_links():
    cfg = SimConfig(n_sensors=8, seed=6, initial_energy=0.003)
    sim = Simulation(cfg)
    trace = sim.run()
    assert not sim.any_routed()
    assert trace.snapshots[-1].links == ()
    assert trace.validate() == []


def test_run_respects_max_rounds():
    cfg = SimConfig(n_sensors=8, seed=6, initial_energy=0.5, max_rounds=7)
    sim = Simulation(cfg)
    trace = sim.run()
    assert sim.round == 7
    assert trace.snapshots[-1].t == 7


def test_final_snapshot_off_interval():
    cfg = SimConfig(n_sensors=6, seed=9, initial_energy=0.002, snapshot_interval=1000)
    trace = Simulation(cfg).run()
    ts = [s.t for s in trace.snapshots]
    assert ts[0] == 0
    assert len(ts) == 2  # initial plus the forced final one
    assert ts == sorted(set(ts))


def test_traces_are_byte_identical_per_seed():
    cfg = SimConfig(n_sensors=20, seed=5, initial_energy=0.01)
    a = "\n".join(trace_to_lines(Simulation(cfg).run()))
    b = "\n".join(trace_to_lines(Simulation(cfg).run()))
    assert a == b


def test_energy_conservation():
    cfg = SimConfig(n_sensors=25, seed=2, initial_energy=0.02)
    sim = Simulation(cfg)
    trace = sim.run()
    spent = sum(e.energy for e in sim.events)
    residual = {
        n.id: n.energy
        for n in trace.snapshots[-1].nodes
        if n.role is Role.SENSOR
    }
    balance = sum(cfg.initial_energy - residual[i] for i in residual)
    assert spent == pytest.approx(balance, rel=1e-12)


def test_event_log_sidecar(tmp_path):
    cfg = SimConfig(n_sensors=5, seed=8, initial_energy=0.005)
    sim = Simulation(cfg)
    sim.run()
    path = tmp_path / "events.jsonl"
    events_write(sim.events, str(path))
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == len(sim.events)
    seen = set()
    for line in lines:
        data = json.loads(line)
        assert set(data) == {"round", "kind", "node", "detail"}
        seen.add(data["kind"])
    assert "tx" in seen and "deliver" in seen
