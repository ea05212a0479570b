"""
Core module for the Push-Pull simulator.

This module contains the numerical core: directed graphs and their
generators, mixing matrices and their certification, spectral series
constants, objective families and the Stochastic Push-Pull engine.
"""

__version__ = "0.1.0"
