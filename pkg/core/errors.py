# -*- coding: utf-8 -*-
"""Shared exception hierarchy for the simulator.

Every module raises subclasses of SimulationError so callers (the CLI in
particular) can report failures uniformly. Errors that more than one module
raises live here; module-specific errors live next to their module.

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import, division, print_function


class SimulationError(Exception):
    """Base exception for all simulator errors."""
    pass


class DimensionError(SimulationError):
    """Raised when array or graph sizes do not agree.

    Attributes:
        expected: The expected size or shape
        actual: The size or shape that was received
    """

    def __init__(self, message, expected=None, actual=None):
        self.expected = expected
        self.actual = actual
        if expected is not None or actual is not None:
            message = "{} (expected {}, got {})".format(message, expected, actual)
        super(DimensionError, self).__init__(message)


class AssumptionViolationError(SimulationError):
    """Raised when an input violates a standing assumption of the method.

    Attributes:
        assumption (str): Short name of the violated assumption
    """

    def __init__(self, assumption, detail=''):
        self.assumption = assumption
        self.detail = detail
        message = "Assumption violated: {}".format(assumption)
        if detail:
            message += " ({})".format(detail)
        super(AssumptionViolationError, self).__init__(message)


class NumericalError(SimulationError):
    """Raised when an iterative numerical routine fails to converge.

    Attributes:
        routine (str): Name of the routine
        iterations (int): Iterations performed before giving up
    """

    def __init__(self, routine, iterations, detail=''):
        self.routine = routine
        self.iterations = iterations
        message = "{} did not converge within {} iterations".format(routine, iterations)
        if detail:
            message += ": {}".format(detail)
        super(NumericalError, self).__init__(message)
