"""Exact desk-scale machinery for theta lifts of supercuspidal data."""

__version__ = "0.1.0"
