"""
Test suite for the Push-Pull simulator.

This module contains unit tests per source module and the end-to-end
acceptance checks in test_acceptance.
"""

__version__ = "0.1.0"
