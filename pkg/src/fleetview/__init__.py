"""Deterministic shared-world fleet simulator, worldview diff engine, and
operator-facing snapshot service."""

__version__ = "0.1.0"
