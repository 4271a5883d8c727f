"""HTTP facade over the simulator and analyzer."""

from .app import create_app

__all__ = ["create_app"]
