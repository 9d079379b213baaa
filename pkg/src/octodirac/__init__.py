"""Exact octonion and real Dirac-matrix algebra with verification suites."""

__version__ = "0.1.0"
