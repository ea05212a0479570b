# -*- coding: utf-8 -*-
"""Per-iteration run records and their CSV / JSON forms.

Author: Push-Pull Simulator Team
Date: 2026-02-14
"""

from __future__ import absolute_import, division, print_function

import csv
import io
import json
import logging
from collections import namedtuple

import numpy as np

logger = logging.getLogger(__name__)

CSV_COLUMNS = ('t', 'gamma', 'grad_norm_sq', 'consensus', 'tracking', 'invariant_residual',
               'f_hat')

TraceRecord = namedtuple('TraceRecord', CSV_COLUMNS + ('dist_sq',))

SHAPE_WINDOW = 50


def _format(value):
    if value is None:
        return ''
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return '%.17g' % value


def _parse(value, integer=False):
    if value == '':
        return None
    return int(value) if integer else float(value)


def smoothed(values, window=SHAPE_WINDOW):
    """Moving average over `window` consecutive values, valid part only.

    Raises:
        ValueError: If window < 1 or there are fewer than `window` values
    """
    values = np.asarray(values, dtype=float)
    if window < 1:
        raise ValueError("window must be at least 1, got {}".format(window))
    if len(values) < window:
        raise ValueError("Need at least {} values to smooth, got {}".format(window, len(values)))
    return np.convolve(values, np.ones(window) / window, mode='valid')


def decay_profile(values, window=SHAPE_WINDOW):
    """
    Describe how a positive series falls after smoothing.

    A stochastic series that has reached its noise floor wanders around it, so
    rises are measured against the running minimum of the smoothed curve
    rather than step to step.

    Args:
        values (array_like): Series in iteration order
        window (int): Smoothing window

    Returns:
        dict: window, start and end of the smoothed curve,
            orders_of_magnitude (log10 of start / end), max_relative_rise
            (largest excess over the running minimum, relative to it) and
            rises (number of steps where the smoothed curve goes up)
    """
    curve = smoothed(values, window)
    running = np.minimum.accumulate(curve)
    with np.errstate(divide='ignore', invalid='ignore'):
        excess = np.where(running > 0.0, curve / running - 1.0, 0.0)
        orders = np.log10(curve[0] / curve[-1]) if curve[-1] > 0.0 else float('inf')
    return {
        'window': int(window),
        'start': float(curve[0]),
        'end': float(curve[-1]),
        'orders_of_magnitude': float(orders),
        'max_relative_rise': float(np.max(excess)),
        'rises': int(np.sum(np.diff(curve) > 0.0)),
    }


class Trace(object):
    """Metrics recorded along one simulation run.

    Attributes:
        records (list): TraceRecord tuples in iteration order
        metadata (dict): Seed, pair id, problem id and run diagnostics
        final_x_hat (numpy.ndarray): Output point after the last iteration
        final_state (State): Iterates after the last iteration
    """

    def __init__(self, records=None, metadata=None, final_x_hat=None):
        self.records = list(records or [])
        self.metadata = dict(metadata or {})
        self.final_x_hat = final_x_hat
        self.final_state = None

    def append(self, record):
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def column(self, name):
        """Return one field over all records as a float array (None -> nan)."""
        values = [getattr(record, name) for record in self.records]
        return np.array([np.nan if v is None else v for v in values], dtype=float)

    def time_average(self, name='grad_norm_sq'):
        return float(np.mean(self.column(name)))

    def tail_average(self, name='dist_sq', window=None):
        """Mean of a field over the last `window` records (all when None)."""
        values = self.column(name)
        if window:
            values = values[-int(window):]
        return float(np.mean(values))

    def decay_profile(self, name='grad_norm_sq', window=SHAPE_WINDOW):
        return decay_profile(self.column(name), window)

    def to_csv_string(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(CSV_COLUMNS)
        for record in self.records:
            writer.writerow([_format(getattr(record, name)) for name in CSV_COLUMNS])
        return buffer.getvalue()

    @classmethod
    def from_csv_string(cls, text, metadata=None):
        reader = csv.DictReader(io.StringIO(text))
        records = []
        for row in reader:
            values = dict((name, _parse(row[name], integer=(name == 't'))) for name in CSV_COLUMNS)
            records.append(TraceRecord(dist_sq=None, **values))
        return cls(records, metadata)

    def metadata_json(self):
        return json.dumps(self.metadata, indent=2, sort_keys=True)

    @classmethod
    def aggregate(cls, traces):
        """Arithmetic mean across traces per iteration index.

        Raises:
            ValueError: If the traces were recorded at different iterations
        """
        if not traces:
            raise ValueError("Nothing to aggregate")
        steps = [record.t for record in traces[0].records]
        for trace in traces[1:]:
            if [record.t for record in trace.records] != steps:
                raise ValueError("Traces record different iterations and cannot be averaged")

        records = []
        for index, t in enumerate(steps):
            values = {'t': t}
            for name in TraceRecord._fields[1:]:
                column = [getattr(trace.records[index], name) for trace in traces]
                values[name] = None if any(v is None for v in column) else float(np.mean(column))
            records.append(TraceRecord(**values))
        metadata = {
            'aggregate': 'mean',
            'seeds': [trace.metadata.get('seed') for trace in traces],
        }
        return cls(records, metadata)
