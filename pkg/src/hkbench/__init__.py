"""Characteristic-p invariants of graded rings over prime fields."""

__version__ = "0.1.0"
