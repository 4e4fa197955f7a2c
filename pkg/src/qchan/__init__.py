"""Verification toolkit for quantum channels: representations, dilations and verdicts."""

__version__ = "0.1.0"
