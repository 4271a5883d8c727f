"""Classic complex-network measures over one directed snapshot.

All functions treat the snapshot as a plain directed graph: sinks are
ordinary nodes, links are unweighted, and distances count hops.  Where
a measure is undefined (too few nodes, no finite pairs, zero variance)
the functions return ``None`` rather than a filler value, and CSV
writers render that as an empty cell.

Several functions take ``restrict``: an optional collection of node ids
limiting the computation to the induced subgraph on those nodes (used
for the sink-connected component).  ``None`` means the whole snapshot.
"""

from __future__ import annotations

import statistics
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Collection, Iterable

from ..model import GraphSnapshot


class DegreeMode(Enum):
    IN = "in"
    OUT = "out"
    ALL = "all"


@dataclass(frozen=True)
class Histogram:
    """Counts over consecutive bins; ``bin_edges`` has one extra entry.

    Every bin is half-open [lo, hi) except the last, which is closed so
    the maximum value lands inside.  Integer-valued histograms use
    width-1 bins, one per value between the observed min and max.
    """

    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]

    def as_dict(self) -> dict[int, int]:
        """Nonzero bins of a width-1 integer histogram, {value: count}."""
        return {
            int(lo): c
            for lo, c in zip(self.bin_edges, self.counts)
            if c != 0
        }


@dataclass(frozen=True)
class FunctionSamples:
    """A sampled function: (x, y, support) with strictly increasing x."""

    points: tuple[tuple[float, float, int], ...]

    def xs(self) -> list[float]:
        return [p[0] for p in self.points]

    def ys(self) -> list[float]:
        return [p[1] for p in self.points]


def integer_histogram(values: Iterable[int]) -> Histogram:
    """Width-1 histogram over integer values (empty input -> no bins)."""
    values = list(values)
    if not values:
        return Histogram(bin_edges=(0.0,), counts=())
    lo, hi = min(values), max(values)
    counts = [0] * (hi - lo + 1)
    for v in values:
        counts[v - lo] += 1
    return Histogram(
        bin_edges=tuple(float(v) for v in range(lo, hi + 2)),
        counts=tuple(counts),
    )


def fixed_histogram(values: Iterable[float], nbins: int, lo: float, hi: float) -> Histogram:
    """Equal-width histogram of ``nbins`` bins spanning [lo, hi].

    A degenerate span (hi == lo) is widened to one unit so the binning
    stays defined; values at ``hi`` fall in the last (closed) bin.
    """
    if hi <= lo:
        hi = lo + 1.0
    width = (hi - lo) / nbins
    counts = [0] * nbins
    for v in values:
        idx = int((v - lo) / width)
        if idx >= nbins:
            idx = nbins - 1
        elif idx < 0:
            idx = 0
        counts[idx] += 1
    return Histogram(
        bin_edges=tuple(lo + i * width for i in range(nbins)) + (hi,),
        counts=tuple(counts),
    )


# -- adjacency helpers ------------------------------------------------------


def _members(s: GraphSnapshot, restrict: Collection[int] | None) -> list[int]:
    if restrict is None:
        return sorted(s.node_ids())
    members = set(restrict)
    return sorted(i for i in s.node_ids() if i in members)


def _induced_adjacency(
    s: GraphSnapshot, members: list[int]
) -> tuple[dict[int, list[int]], dict[int, list[int]]]:
    member_set = set(members)
    out_adj: dict[int, list[int]] = {i: [] for i in members}
    in_adj: dict[int, list[int]] = {i: [] for i in members}
    for src, dst in s.links:
        if src in member_set and dst in member_set:
            out_adj[src].append(dst)
            in_adj[dst].append(src)
    for lst in out_adj.values():
        lst.sort()
    for lst in in_adj.values():
        lst.sort()
    return out_adj, in_adj


def _all_degrees(
    out_adj: dict[int, list[int]], in_adj: dict[int, list[int]]
) -> dict[int, int]:
    return {i: len(out_adj[i]) + len(in_adj[i]) for i in out_adj}


# -- counts and density ------------------------------------------------------


def node_link_counts(s: GraphSnapshot) -> tuple[int, int, int, int]:
    """(n, m, n_plus, n_minus): totals plus non-isolate/isolate node counts.

    An isolate has no incident links in either direction.
    """
    n = len(s.nodes)
    m = len(s.links)
    touched: set[int] = set()
    for src, dst in s.links:
        touched.add(src)
        touched.add(dst)
    n_plus = sum(1 for node in s.nodes if node.id in touched)
    return n, m, n_plus, n - n_plus


def density(s: GraphSnapshot) -> float | None:
    """Directed density m / (n (n-1)); undefined below two nodes."""
    n = len(s.nodes)
    if n < 2:
        return None
    return len(s.links) / (n * (n - 1))


# -- degrees ------------------------------------------------------------------


def degree(s: GraphSnapshot, node_id: int, mode: DegreeMode) -> int:
    outs = sum(1 for src, _ in s.links if src == node_id)
    ins = sum(1 for _, dst in s.links if dst == node_id)
    if mode is DegreeMode.IN:
        return ins
    if mode is DegreeMode.OUT:
        return outs
    return ins + outs


def _degrees(
    s: GraphSnapshot, mode: DegreeMode, restrict: Collection[int] | None
) -> dict[int, int]:
    members = _members(s, restrict)
    out_adj, in_adj = _induced_adjacency(s, members)
    if mode is DegreeMode.IN:
        return {i: len(in_adj[i]) for i in members}
    if mode is DegreeMode.OUT:
        return {i: len(out_adj[i]) for i in members}
    return _all_degrees(out_adj, in_adj)


def degree_stats(
    s: GraphSnapshot, mode: DegreeMode, restrict: Collection[int] | None = None
) -> tuple[int, int, float] | None:
    """(min, max, mean) degree over the chosen node set; None when empty."""
    degs = _degrees(s, mode, restrict)
    if not degs:
        return None
    values = list(degs.values())
    return min(values), max(values), sum(values) / len(values)


def degree_distribution(
    s: GraphSnapshot, mode: DegreeMode, restrict: Collection[int] | None = None
) -> Histogram:
    """Width-1 integer histogram of degrees over the chosen node set."""
    return integer_histogram(_degrees(s, mode, restrict).values())


def assortativity(s: GraphSnapshot) -> float | None:
    """Pearson correlation of ALL-degrees across link endpoints.

    Undefined (None) with fewer than two links or when either endpoint
    degree sequence is constant.
    """
    members = _members(s, None)
    out_adj, in_adj = _induced_adjacency(s, members)
    deg = _all_degrees(out_adj, in_adj)
    xs = [float(deg[src]) for src, _ in s.links]
    ys = [float(deg[dst]) for _, dst in s.links]
    if len(xs) < 2:
        return None
    try:
        return statistics.correlation(xs, ys)
    except statistics.StatisticsError:
        return None


def avg_neighbor_degree(s: GraphSnapshot) -> FunctionSamples:
    """Mean neighbor ALL-degree as a function of node ALL-degree.

    Neighbors are the union of in- and out-neighbors; isolates are
    skipped.  Support counts the nodes in each degree group.
    """
    members = _members(s, None)
    out_adj, in_adj = _induced_adjacency(s, members)
    deg = _all_degrees(out_adj, in_adj)
    groups: dict[int, list[float]] = {}
    for i in members:
        neighbors = set(out_adj[i]) | set(in_adj[i])
        if not neighbors:
            continue
        knn = sum(deg[j] for j in neighbors) / len(neighbors)
        groups.setdefault(deg[i], []).append(knn)
    points = tuple(
        (float(k), sum(v) / len(v), len(v)) for k, v in sorted(groups.items())
    )
    return FunctionSamples(points=points)


# -- distances ----------------------------------------------------------------


def _bfs_dist(adj: dict[int, list[int]], source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def all_pairs_distances(s: GraphSnapshot) -> dict[int, dict[int, int]]:
    """Hop distances d[u][v] for every reachable pair (missing = infinite)."""
    members = _members(s, None)
    out_adj, _ = _induced_adjacency(s, members)
    return {u: _bfs_dist(out_adj, u) for u in members}


def _finite_pair_distances(s: GraphSnapshot) -> list[int]:
    return [
        d
        for u, row in all_pairs_distances(s).items()
        for v, d in row.items()
        if v != u
    ]


def diameter(s: GraphSnapshot) -> int | None:
    """Longest finite shortest-path length; None without finite pairs."""
    dists = _finite_pair_distances(s)
    return max(dists) if dists else None


def average_distance(s: GraphSnapshot) -> float | None:
    """Mean over finite ordered pairs; None without finite pairs."""
    dists = _finite_pair_distances(s)
    return sum(dists) / len(dists) if dists else None


def distance_distribution(s: GraphSnapshot) -> Histogram:
    """Width-1 histogram of finite ordered-pair distances."""
    return integer_histogram(_finite_pair_distances(s))


def hop_plot(s: GraphSnapshot) -> FunctionSamples:
    """Cumulative reachable pairs within h hops, h = 1..diameter.

    Support carries the number of pairs at exactly h hops; every h up
    to the diameter is realized because subpaths of shortest paths are
    shortest.
    """
    dists = _finite_pair_distances(s)
    if not dists:
        return FunctionSamples(points=())
    hist: dict[int, int] = {}
    for d in dists:
        hist[d] = hist.get(d, 0) + 1
    points = []
    cumulative = 0
    for h in range(1, max(hist) + 1):
        at_h = hist.get(h, 0)
        cumulative += at_h
        points.append((float(h), float(cumulative), at_h))
    return FunctionSamples(points=tuple(points))


# -- betweenness --------------------------------------------------------------


def _brandes(members: list[int], adj: dict[int, list[int]]) -> dict[int, float]:
    """Unnormalized directed betweenness with fractional path counting."""
    bc = dict.fromkeys(members, 0.0)
    for source in members:
        stack: list[int] = []
        preds: dict[int, list[int]] = {w: [] for w in members}
        sigma = dict.fromkeys(members, 0)
        dist = dict.fromkeys(members, -1)
        sigma[source] = 1
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = dict.fromkeys(members, 0.0)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += (sigma[v] / sigma[w]) * (1.0 + delta[w])
            if w != source:
                bc[w] += delta[w]
    return bc


def betweenness(
    s: GraphSnapshot, restrict: Collection[int] | None = None
) -> dict[int, float] | None:
    """Freeman-normalized directed betweenness per node.

    Shortest paths are counted fractionally over ordered pairs with the
    endpoints excluded, then divided by (N-1)(N-2) where N is the size
    of the analyzed node set.  Undefined (None) for N < 3.
    """
    members = _members(s, restrict)
    n = len(members)
    if n < 3:
        return None
    adj, _ = _induced_adjacency(s, members)
    raw = _brandes(members, adj)
    norm = (n - 1) * (n - 2)
    return {v: raw[v] / norm for v in members}


@dataclass(frozen=True)
class BetweennessSummary:
    """Aggregates of one snapshot's betweenness values.

    ``neighbor_pairs`` holds raw per-node (b, mean neighbor b) points
    (union of in/out neighbors); binning is left to the consumer.
    All fields are None when betweenness itself is undefined.
    """

    average: float | None
    histogram: Histogram | None
    by_degree: FunctionSamples | None
    neighbor_pairs: tuple[tuple[float, float], ...] | None


def betweenness_functions(
    s: GraphSnapshot, restrict: Collection[int] | None = None
) -> BetweennessSummary:
    """Average, 20-bin histogram, <b>_k, and raw (b, b_nn) pairs."""
    b = betweenness(s, restrict)
    if b is None:
        return BetweennessSummary(None, None, None, None)
    members = _members(s, restrict)
    out_adj, in_adj = _induced_adjacency(s, members)
    deg = _all_degrees(out_adj, in_adj)
    values = [b[v] for v in members]
    average = sum(values) / len(values)
    histogram = fixed_histogram(values, 20, 0.0, max(values))
    groups: dict[int, list[float]] = {}
    for v in members:
        groups.setdefault(deg[v], []).append(b[v])
    by_degree = FunctionSamples(
        points=tuple(
            (float(k), sum(g) / len(g), len(g)) for k, g in sorted(groups.items())
        )
    )
    pairs = []
    for v in members:
        neighbors = set(out_adj[v]) | set(in_adj[v])
        if not neighbors:
            continue
        pairs.append((b[v], sum(b[w] for w in neighbors) / len(neighbors), v))
    pairs.sort()
    neighbor_pairs = tuple((bv, bnn) for bv, bnn, _ in pairs)
    return BetweennessSummary(average, histogram, by_degree, neighbor_pairs)
