"""Request/response models for the HTTP service.

Traces travel as their serialized lines (config line first, one
snapshot object per line) so a response body can be written straight
to a trace file and vice versa.
"""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field


class SimulateRequest(BaseModel):
    # overrides applied on top of the built-in defaults
    config: dict[str, Any] = Field(default_factory=dict)
    seed: int | None = None


class SimulateResponse(BaseModel):
    rounds: int
    snapshots: int
    alive_sensors: int
    n_sensors: int
    trace: list[str]


class AnalyzeRequest(BaseModel):
    trace: list[str]
    metrics: list[str] | None = None
    dist_times: list[int] = Field(default_factory=list)


class TablePayload(BaseModel):
    columns: list[str]
    rows: list[list[Any]]


class AnalyzeResponse(BaseModel):
    columns: list[str]
    rows: list[list[Any]]
    # timestamp (as string, JSON object keys) -> kind -> table
    distributions: dict[str, dict[str, TablePayload]] = Field(default_factory=dict)


class ReportRequest(BaseModel):
    analysis: AnalyzeResponse
    figures: list[str] | None = None
    at: list[int] = Field(default_factory=list)


class ReportResponse(BaseModel):
    # figure output name -> SVG document
    figures: dict[str, str]


class DefaultsResponse(BaseModel):
    config: dict[str, Any]
    metric_groups: dict[str, list[str]]
    figure_names: list[str]


class HealthResponse(BaseModel):
    status: str
    version: str
