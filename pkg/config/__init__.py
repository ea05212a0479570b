"""
Configuration module for the Push-Pull simulator.

This module handles experiment configuration loading, defaults, overrides
and validation.
"""

__version__ = "0.1.0"
