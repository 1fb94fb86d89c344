"""Surrogate-assisted multi-objective optimisation of PEM fuel cell operating conditions."""

__version__ = "0.1.0"
