"""
Tools module for the Push-Pull simulator.

This module contains the user-facing entry points: the experiment runner
(validate, run and sweep pipelines) and the command-line interface.
"""

__version__ = "0.1.0"
