"""Exact-arithmetic workbench for Kochen-Specker colorability and the finite precision loophole."""

__version__ = "0.1.0"
