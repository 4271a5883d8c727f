"""Builders shared across the test modules."""

from __future__ import annotations

from hypothesis import strategies as st

from wsntopo.model import GraphSnapshot, Mode, NodeRecord, Role


def grid_pos(i: int) -> tuple[float, float]:
    return (float(i % 10) * 5.0 + 2.0, float(i // 10) * 5.0 + 2.0)


def make_snapshot(
    n_sensors: int,
    links=(),
    *,
    n_sinks: int = 0,
    t: int = 0,
    dead=(),
    selfish=(),
) -> GraphSnapshot:
    """Grid-placed snapshot: sensor ids 0..n-1, sink ids following."""
    dead = set(dead)
    selfish = set(selfish)
    nodes = []
    for i in range(n_sensors):
        mode = Mode.DEAD if i in dead else Mode.SELFISH if i in selfish else Mode.NORMAL
        energy = 0.0 if i in dead else 1.0
        x, y = grid_pos(i)
        nodes.append(NodeRecord(i, Role.SENSOR, x, y, energy, mode))
    for k in range(n_sinks):
        x, y = grid_pos(n_sensors + k)
        nodes.append(NodeRecord(n_sensors + k, Role.SINK, x, y, 0.0, Mode.NORMAL))
    return GraphSnapshot(t=t, nodes=tuple(nodes), links=tuple(links))


def adjacency(links) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {}
    for u, v in links:
        adj.setdefault(u, []).append(v)
    return adj


def random_digraph(rng, max_n=8, min_n=2):
    """Uniform random directed graph; returns (n, links)."""
    n = rng.randint(min_n, max_n)
    p = rng.uniform(0.15, 0.6)
    links = [
        (u, v)
        for u in range(n)
        for v in range(n)
        if u != v and rng.random() < p
    ]
    return n, tuple(links)


def random_sink_dag(rng, max_n=10):
    """Layered sensors above one sink; links point strictly downward.

    Some sensors end up with no way down, which is wanted coverage
    (unrouted nodes).  Returns (n_sensors, links); the sink id is n.
    """
    n = rng.randint(2, max_n)
    sink = n
    levels = {i: rng.randint(1, 3) for i in range(n)}
    links = []
    for i in range(n):
        targets = [j for j in range(n) if levels[j] < levels[i]]
        if levels[i] == 1 or (levels[i] == 2 and rng.random() < 0.15):
            targets.append(sink)
        for v in targets:
            if rng.random() < 0.7:
                links.append((i, v))
    return n, tuple(links)


@st.composite
def digraph_snapshots(draw, max_n=8):
    n = draw(st.integers(min_value=2, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    links = draw(
        st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))
    )
    return make_snapshot(n, tuple(sorted(links)))


@st.composite
def sink_dag_snapshots(draw, max_n=8):
    n = draw(st.integers(min_value=2, max_value=max_n))
    sink = n
    levels = [draw(st.integers(min_value=1, max_value=3)) for _ in range(n)]
    links = []
    for i in range(n):
        targets = [j for j in range(n) if levels[j] < levels[i]]
        if levels[i] == 1:
            targets.append(sink)
        chosen = draw(
            st.lists(st.sampled_from(targets), unique=True, max_size=len(targets))
        ) if targets else []
        links.extend((i, v) for v in chosen)
    return make_snapshot(n, tuple(links), n_sinks=1)
