"""Forest road management platform: network ingest, report lifecycle, blockage-aware routing."""

__version__ = "0.1.0"
