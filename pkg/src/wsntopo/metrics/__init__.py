"""Graph metrics over topology snapshots: classic whole-graph measures
and sink-centric measures for data-collection networks."""

from . import classic, sink

__all__ = ["classic", "sink"]
