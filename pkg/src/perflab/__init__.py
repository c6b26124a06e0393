"""Bounded-progression models for performance series, plus a lattice simulator."""

__version__ = "0.1.0"
