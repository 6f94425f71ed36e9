"""Workflow trace analysis, synthetic trace generation and simulation."""

__version__ = "0.1.0"
