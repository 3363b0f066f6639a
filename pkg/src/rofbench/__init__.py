"""Analogue vs digitised radio-over-fiber fronthaul toolkit."""

__version__ = "0.1.0"
