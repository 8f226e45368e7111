"""Enumeration and counting of log Calabi-Yau divisors in small rational surfaces."""

__version__ = "0.1.0"
