"""FastAPI application: simulate, analyze, and report over HTTP.

The endpoints chain: /simulate returns trace lines, /analyze consumes
them and returns metric rows plus distribution tables, /report turns
an analysis payload into SVG figures.  Invalid input maps to 400 with
the underlying error message as the detail.
"""

from __future__ import annotations

import dataclasses
import logging

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..analyze import (
    METRIC_GROUPS,
    AnalysisResult,
    MissingTimestampError,
    Table,
    UnknownMetricError,
    analyze_trace,
    distribution_tables,
    snapshot_at,
)
from ..config import ConfigError, config_from_dict
from ..figures import (
    DIST_FIGURES,
    FIGURE_NAMES,
    LINE_FIGURES,
    UnknownFigureError,
    render_figure,
)
from ..model import Mode, Role, TraceError, trace_from_lines, trace_to_lines
from ..sim import Simulation
from .schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    DefaultsResponse,
    HealthResponse,
    ReportRequest,
    ReportResponse,
    SimulateRequest,
    SimulateResponse,
    TablePayload,
)

log = logging.getLogger(__name__)


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


def create_app() -> FastAPI:
    app = FastAPI(title="wsntopo", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.get("/defaults", response_model=DefaultsResponse)
    def defaults() -> DefaultsResponse:
        cfg = config_from_dict({})
        return DefaultsResponse(
            config=cfg.to_json_dict(),
            metric_groups={g: list(cols) for g, cols in METRIC_GROUPS.items()},
            figure_names=list(FIGURE_NAMES),
        )

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest) -> SimulateResponse:
        try:
            cfg = config_from_dict(req.config)
            if req.seed is not None:
                cfg = dataclasses.replace(cfg, seed=req.seed)
            cfg.validate()
            sim = Simulation(cfg)
        except ConfigError as exc:
            raise _bad_request(exc) from exc
        trace = sim.run()
        last = trace.snapshots[-1]
        alive = sum(
            1
            for node in last.nodes
            if node.role is Role.SENSOR and node.mode is not Mode.DEAD
        )
        return SimulateResponse(
            rounds=last.t,
            snapshots=len(trace.snapshots),
            alive_sensors=alive,
            n_sensors=cfg.n_sensors,
            trace=list(trace_to_lines(trace)),
        )

    @app.post("/analyze", response_model=AnalyzeResponse)
    def analyze(req: AnalyzeRequest) -> AnalyzeResponse:
        try:
            trace = trace_from_lines(req.trace)
            result = analyze_trace(trace, req.metrics)
            distributions = {}
            for t in req.dist_times:
                tables = distribution_tables(snapshot_at(trace, t))
                distributions[str(t)] = {
                    kind: TablePayload(
                        columns=list(table.columns),
                        rows=[list(row) for row in table.rows],
                    )
                    for kind, table in tables.items()
                }
        except (TraceError, UnknownMetricError, MissingTimestampError) as exc:
            raise _bad_request(exc) from exc
        return AnalyzeResponse(
            columns=list(result.columns),
            rows=[list(row) for row in result.rows],
            distributions=distributions,
        )

    @app.post("/report", response_model=ReportResponse)
    def report(req: ReportRequest) -> ReportResponse:
        result = AnalysisResult(
            columns=tuple(req.analysis.columns),
            rows=tuple(tuple(row) for row in req.analysis.rows),
        )
        all_tables = {
            int(t): {
                kind: Table(
                    columns=tuple(tp.columns),
                    rows=tuple(tuple(row) for row in tp.rows),
                )
                for kind, tp in by_kind.items()
            }
            for t, by_kind in req.analysis.distributions.items()
        }
        if req.figures:
            unknown = [f for f in req.figures if f not in FIGURE_NAMES]
            if unknown:
                raise _bad_request(UnknownFigureError(unknown))
            names = req.figures
        else:
            names = list(LINE_FIGURES)
            if all_tables:
                names += list(DIST_FIGURES)
        if req.at:
            missing = [t for t in req.at if t not in all_tables]
            if missing:
                available = ", ".join(str(t) for t in sorted(all_tables))
                raise _bad_request(
                    ValueError(
                        f"no distribution tables at {missing}; "
                        f"available: {available}"
                    )
                )
            tables = {t: all_tables[t] for t in req.at}
        else:
            tables = all_tables
        out: dict[str, str] = {}
        for name in names:
            if name in DIST_FIGURES and not tables:
                raise _bad_request(
                    ValueError(
                        f"figure {name} needs distribution tables; "
                        "request /analyze with dist_times first"
                    )
                )
            out.update(render_figure(name, result=result, tables=tables))
        return ReportResponse(figures=out)

    return app
