"""Functional codes on Hermitian varieties over F_{t^2}."""

__version__ = "0.1.0"
