"""Turn a trace into metric time series, CSV files, and distribution tables.

Scalar metrics are grouped; a selector picks groups by name (empty
selector = everything).  The CSV holds one row per snapshot with ``t``
first; undefined values are empty cells.  Distribution-style outputs
(histograms and per-degree functions) are per-snapshot sidecar tables,
written as ``<stem>_t<T>_<kind>.csv`` next to the main CSV.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from typing import Sequence

from .metrics import classic
from .metrics.sink import (
    density_connected,
    sink_betweenness_functions,
    sink_connected,
    sink_distance_distribution,
    sink_radius,
    avg_sink_distance,
)
from .model import GraphSnapshot, TemporalTrace

log = logging.getLogger(__name__)

_MODES = {
    "in": classic.DegreeMode.IN,
    "out": classic.DegreeMode.OUT,
    "all": classic.DegreeMode.ALL,
}


def _degree_columns() -> tuple[str, ...]:
    cols = []
    for restrict in ("all", "conn"):
        for mode in ("in", "out", "all"):
            for stat in ("min", "max", "mean"):
                cols.append(f"{stat}_{mode}_degree_{restrict}")
    return tuple(cols)


METRIC_GROUPS: dict[str, tuple[str, ...]] = {
    "counts": ("n", "m", "n_plus", "n_minus", "isolate_fraction"),
    "density": ("d", "d_plus"),
    "degree": _degree_columns(),
    "assortativity": ("rho",),
    "distance": ("diameter", "avg_distance"),
    "sink_distance": ("sink_radius", "avg_sink_distance"),
    "betweenness": ("avg_betweenness",),
    "sink_betweenness": ("max_sink_betweenness", "avg_sink_betweenness"),
}

DIST_KINDS = (
    "degree_dist",
    "knn_k",
    "distance_dist",
    "hop_plot",
    "sink_distance_dist",
    "betweenness_hist",
    "b_k",
    "bnn_b",
    "sb_hist",
    "sb_k",
    "sbnn_sb",
)


class UnknownMetricError(ValueError):
    def __init__(self, names: Sequence[str]):
        valid = ", ".join(METRIC_GROUPS)
        super().__init__(
            f"unknown metric name(s): {', '.join(sorted(names))}; valid names: {valid}"
        )


class MissingTimestampError(ValueError):
    def __init__(self, t: int, available: Sequence[int]):
        listed = ", ".join(str(v) for v in available)
        super().__init__(f"no snapshot at t={t}; available: {listed}")
        self.t = t


def select_groups(metrics: Sequence[str] | None) -> list[str]:
    """Resolve a selector to group names in canonical order."""
    if not metrics:
        return list(METRIC_GROUPS)
    unknown = [m for m in metrics if m not in METRIC_GROUPS]
    if unknown:
        raise UnknownMetricError(unknown)
    wanted = set(metrics)
    return [g for g in METRIC_GROUPS if g in wanted]


@dataclass(frozen=True)
class MetricSeries:
    """One metric over time; None points are genuine gaps, not zeros."""

    name: str
    points: tuple[tuple[int, float | None], ...]


@dataclass(frozen=True)
class AnalysisResult:
    """Selected metric columns (t first) with one row per snapshot."""

    columns: tuple[str, ...]
    rows: tuple[tuple, ...]

    def series(self, name: str) -> MetricSeries:
        if name not in self.columns:
            raise KeyError(f"column {name!r} not in this analysis")
        idx = self.columns.index(name)
        return MetricSeries(
            name=name,
            points=tuple((row[0], row[idx]) for row in self.rows),
        )


def compute_row(s: GraphSnapshot, groups: Sequence[str]) -> dict[str, object]:
    """All selected metrics of one snapshot, keyed by column name."""
    row: dict[str, object] = {"t": s.t}
    conn_members: frozenset[int] | None = None

    def conn() -> frozenset[int]:
        nonlocal conn_members
        if conn_members is None:
            conn_members = sink_connected(s).members
        return conn_members

    if "counts" in groups:
        n, m, n_plus, n_minus = classic.node_link_counts(s)
        row.update(
            n=n, m=m, n_plus=n_plus, n_minus=n_minus,
            isolate_fraction=(n_minus / n) if n else None,
        )
    if "density" in groups:
        row["d"] = classic.density(s)
        row["d_plus"] = density_connected(s)
    if "degree" in groups:
        for restrict_name in ("all", "conn"):
            restrict = None if restrict_name == "all" else conn()
            for mode_name, mode in _MODES.items():
                stats = classic.degree_stats(s, mode, restrict)
                lo, hi, mean = stats if stats else (None, None, None)
                row[f"min_{mode_name}_degree_{restrict_name}"] = lo
                row[f"max_{mode_name}_degree_{restrict_name}"] = hi
                row[f"mean_{mode_name}_degree_{restrict_name}"] = mean
    if "assortativity" in groups:
        row["rho"] = classic.assortativity(s)
    if "distance" in groups:
        row["diameter"] = classic.diameter(s)
        row["avg_distance"] = classic.average_distance(s)
    if "sink_distance" in groups:
        row["sink_radius"] = sink_radius(s)
        row["avg_sink_distance"] = avg_sink_distance(s)
    if "betweenness" in groups:
        b = classic.betweenness(s, conn())
        row["avg_betweenness"] = (
            sum(b.values()) / len(b) if b is not None else None
        )
    if "sink_betweenness" in groups:
        summary = sink_betweenness_functions(s)
        row["max_sink_betweenness"] = summary.maximum
        row["avg_sink_betweenness"] = summary.mean
    return row


def analyze_trace(
    trace: TemporalTrace, metrics: Sequence[str] | None = None
) -> AnalysisResult:
    """Compute the selected metric groups for every snapshot of a trace."""
    groups = select_groups(metrics)
    columns = ("t",) + tuple(
        col for g in groups for col in METRIC_GROUPS[g]
    )
    rows = []
    for snap in trace.snapshots:
        values = compute_row(snap, groups)
        rows.append(tuple(values[c] for c in columns))
    log.info("analyzed %d snapshots into %d columns", len(rows), len(columns))
    return AnalysisResult(columns=columns, rows=tuple(rows))


# -- distribution sidecars ----------------------------------------------------


@dataclass(frozen=True)
class Table:
    """A small column-named table (the sidecar CSV payload)."""

    columns: tuple[str, ...]
    rows: tuple[tuple, ...]


def _integer_hist_table(hist: classic.Histogram, value_name: str) -> Table:
    rows = tuple(
        (int(lo), count) for lo, count in zip(hist.bin_edges, hist.counts)
    )
    return Table(columns=(value_name, "count"), rows=rows)


def _fixed_hist_table(hist: classic.Histogram | None) -> Table:
    columns = ("bin_lo", "bin_hi", "count")
    if hist is None:
        return Table(columns=columns, rows=())
    rows = tuple(
        (hist.bin_edges[i], hist.bin_edges[i + 1], c)
        for i, c in enumerate(hist.counts)
    )
    return Table(columns=columns, rows=rows)


def _samples_table(samples: classic.FunctionSamples | None, x: str, y: str) -> Table:
    columns = (x, y, "support")
    if samples is None:
        return Table(columns=columns, rows=())
    return Table(columns=columns, rows=tuple(samples.points))


def _pairs_table(pairs: tuple[tuple[float, float], ...] | None, x: str, y: str) -> Table:
    return Table(columns=(x, y), rows=tuple(pairs) if pairs else ())


def distribution_tables(s: GraphSnapshot) -> dict[str, Table]:
    """Every distribution/function of one snapshot, keyed by kind."""
    conn = sink_connected(s).members
    b_summary = classic.betweenness_functions(s, conn)
    sb_summary = sink_betweenness_functions(s)
    hop = classic.hop_plot(s)
    return {
        "degree_dist": _integer_hist_table(
            classic.degree_distribution(s, classic.DegreeMode.ALL, conn), "degree"
        ),
        "knn_k": _samples_table(
            classic.avg_neighbor_degree(s), "degree", "avg_neighbor_degree"
        ),
        "distance_dist": _integer_hist_table(
            classic.distance_distribution(s), "distance"
        ),
        "hop_plot": Table(
            columns=("hops", "pairs_within", "pairs_at"),
            rows=tuple((int(x), y, at) for x, y, at in hop.points),
        ),
        "sink_distance_dist": _integer_hist_table(
            sink_distance_distribution(s), "sink_distance"
        ),
        "betweenness_hist": _fixed_hist_table(b_summary.histogram),
        "b_k": _samples_table(b_summary.by_degree, "degree", "avg_betweenness"),
        "bnn_b": _pairs_table(
            b_summary.neighbor_pairs, "betweenness", "avg_neighbor_betweenness"
        ),
        "sb_hist": _fixed_hist_table(sb_summary.histogram),
        "sb_k": _samples_table(sb_summary.by_degree, "degree", "avg_sink_betweenness"),
        "sbnn_sb": _pairs_table(
            sb_summary.neighbor_pairs,
            "sink_betweenness",
            "avg_neighbor_sink_betweenness",
        ),
    }


def snapshot_at(trace: TemporalTrace, t: int) -> GraphSnapshot:
    """The snapshot with timestamp ``t`` (error lists what exists)."""
    for snap in trace.snapshots:
        if snap.t == t:
            return snap
    raise MissingTimestampError(t, [snap.t for snap in trace.snapshots])


# -- CSV rendering ------------------------------------------------------------


def format_cell(value) -> str:
    """Empty cell for undefined; shortest round-trip decimal for floats."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(columns: tuple[str, ...], rows, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])


def write_analysis_csv(result: AnalysisResult, path: str) -> None:
    _write_csv(result.columns, result.rows, path)


def _parse_cell(text: str):
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_analysis_csv(path: str) -> AnalysisResult:
    """Load a metrics CSV written by write_analysis_csv."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            columns = tuple(next(reader))
        except StopIteration:
            raise ValueError(f"{path}: empty metrics CSV") from None
        rows = []
        for raw in reader:
            if len(raw) != len(columns):
                raise ValueError(
                    f"{path}: row {len(rows) + 2} has {len(raw)} cells, "
                    f"expected {len(columns)}"
                )
            rows.append(tuple(_parse_cell(c) for c in raw))
    return AnalysisResult(columns=columns, rows=tuple(rows))


def write_table_csv(table: Table, path: str) -> None:
    _write_csv(table.columns, table.rows, path)


def sidecar_path(csv_path: str, t: int, kind: str) -> str:
    stem = csv_path[:-4] if csv_path.endswith(".csv") else csv_path
    return f"{stem}_t{t}_{kind}.csv"


def write_distribution_csvs(
    trace: TemporalTrace, times: Sequence[int], csv_path: str
) -> list[str]:
    """Write every distribution kind for each requested timestamp."""
    written = []
    for t in times:
        snap = snapshot_at(trace, t)
        for kind, table in distribution_tables(snap).items():
            path = sidecar_path(csv_path, t, kind)
            write_table_csv(table, path)
            written.append(path)
    return written
