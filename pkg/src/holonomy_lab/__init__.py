"""Adiabatic gauge fields, Chern numbers and holonomies for SU(2) and SU(3) systems."""

__version__ = "0.1.0"
