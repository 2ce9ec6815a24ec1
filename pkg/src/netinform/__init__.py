"""Data-informativity analysis for single-module identification in dynamic networks."""

__version__ = "0.1.0"
