"""Verification tools for derived categories of cubic fourfolds."""

__version__ = "0.1.0"
