"""Simulation and resource estimation for error-corrected and error-detected variational classifiers."""

__version__ = "0.1.0"
