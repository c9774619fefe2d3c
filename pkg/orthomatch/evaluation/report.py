"""
Evaluation reports.

A report stores the per-pair records of a protocol run together with the
aggregates computed from them, the configuration and seeds used and the
tool version. Aggregates are always recomputed from the records with
pandas; loading a report whose stored aggregates disagree with the
recomputation fails.
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import math
import numpy
import pandas

# local imports
from orthomatch.errors import ReportError
from orthomatch.core.serialization import read_json, to_builtin, write_json
from orthomatch.version import __version__

__all__ = ['EvalReport', 'aggregate', 'REPORT_KINDS', 'SCHEMA_VERSION']

SCHEMA_VERSION = 1
REPORT_KINDS = ('mma', 'pose', 'vpr')
CONSISTENCY_TOLERANCE = 1e-9
POSE_CURVE_DEGREES = tuple(range(1, 11))


def _finite_or_none(value):
    value = float(value)
    return value if math.isfinite(value) else None


def _accuracy_table(records, key, thresholds):
    """DataFrame with one row per record and one column per threshold."""
    rows = [record[key] for record in records]
    return pandas.DataFrame(rows, columns=list(thresholds), dtype=float)


def _mma_means(table):
    if table.empty:
        return [0.0] * len(table.columns)
    return [float(v) for v in table.mean(axis=0).tolist()]


def _aggregate_mma(records, config):
    thresholds = config['mma']['thresholds']
    result = {'thresholds': list(thresholds), 'pairs': len(records),
              'empty_pairs': int(sum(r['empty'] for r in records))}
    keys = ['accuracy']
    if any('verified_accuracy' in r for r in records):
        keys.append('verified_accuracy')
    thetas = pandas.Series([float(r['theta']) for r in records],
                           dtype=float)
    for key in keys:
        table = _accuracy_table(records, key, thresholds)
        prefix = 'mma' if key == 'accuracy' else 'mma_verified'
        result[prefix] = _mma_means(table)
        per_theta = table.groupby(thetas.values).mean()
        result[prefix + '_per_theta'] = {
            repr(float(theta)): [float(v) for v in row]
            for theta, row in zip(per_theta.index, per_theta.values)}
        standard = _mma_means(table[(thetas == 0).values])
        rotated = _mma_means(table[(thetas != 0).values])
        result[prefix + '_standard'] = standard
        result[prefix + '_rotated'] = rotated
        result[prefix + '_average'] = [(s + r) / 2.0 for s, r in
                                       zip(standard, rotated)]
    return result


def _pose_statistics(frame):
    succeeded = frame[~frame['failed']]
    count = len(frame)
    statistics = {'pairs': count, 'failures': int(frame['failed'].sum()),
                  'failure_rate': (float(frame['failed'].mean())
                                   if count else 0.0)}
    for column in ('angular_error', 'translation_error'):
        values = succeeded[column].astype(float)
        statistics['mean_' + column] = (_finite_or_none(values.mean())
                                        if len(values) else None)
        statistics['median_' + column] = (_finite_or_none(values.median())
                                          if len(values) else None)
    return statistics


def _aggregate_pose(records, config):
    frame = pandas.DataFrame(records, columns=['sequence', 'failed',
                                               'angular_error',
                                               'translation_error'])
    frame['failed'] = frame['failed'].astype(bool)
    result = _pose_statistics(frame)
    result['per_sequence'] = {
        str(name): _pose_statistics(group)
        for name, group in frame.groupby('sequence', sort=True)}
    return result


def _aggregate_vpr(records, config):
    radii = config['vpr']['report_radii']
    count = len(records)
    frame = pandas.DataFrame(records, columns=['correct', 'no_candidates',
                                               'correct_at'])
    result = {'queries': count,
              'flagged': int(frame['no_candidates'].astype(bool).sum()),
              'recall': (float(frame['correct'].astype(bool).mean())
                         if count else 0.0)}
    result['recall_at'] = {
        repr(float(r)): (float(numpy.mean([rec['correct_at'][repr(float(r))]
                                           for rec in records]))
                         if count else 0.0)
        for r in radii}
    return result


AGGREGATORS = {'mma': _aggregate_mma, 'pose': _aggregate_pose,
               'vpr': _aggregate_vpr}


def aggregate(kind, records, config):
    """Aggregates of a record list for the given report kind."""
    if kind not in AGGREGATORS:
        raise ReportError('Unknown report kind {}.'.format(kind))
    return to_builtin(AGGREGATORS[kind](records, config))


def _differences(stored, computed, path=''):
    """Paths where two aggregate trees differ."""
    if isinstance(computed, dict):
        if not isinstance(stored, dict) or set(stored) != set(computed):
            return [path or '/']
        result = []
        for key in sorted(computed):
            result += _differences(stored[key], computed[key],
                                   '{}/{}'.format(path, key))
        return result
    if isinstance(computed, list):
        if not isinstance(stored, list) or len(stored) != len(computed):
            return [path]
        result = []
        for index, (s, c) in enumerate(zip(stored, computed)):
            result += _differences(s, c, '{}[{}]'.format(path, index))
        return result
    if isinstance(computed, float) and isinstance(stored, (int, float)) \
            and not isinstance(stored, bool):
        if abs(stored - computed) <= CONSISTENCY_TOLERANCE * max(
                1.0, abs(computed)):
            return []
        return [path]
    return [] if stored == computed else [path]


class EvalReport(object):
    """
    Versioned evaluation report.

    Attributes
    ----------
    kind : str
        'mma', 'pose' or 'vpr'.
    config : dict
        Echo of every configuration used (pipeline and protocol).
    seeds : dict
        Seeds used.
    records : list of dict
        One record per evaluated pair or query, in manifest order.
    aggregates : dict
        Summary computed from the records.
    tool_version : str
        Version of the package that wrote the report.

    """

    def __init__(self, kind, config, seeds, records, aggregates=None,
                 tool_version=__version__):
        if kind not in REPORT_KINDS:
            raise ReportError('Unknown report kind {}.'.format(kind))
        self.kind = kind
        self.config = to_builtin(config)
        self.seeds = to_builtin(seeds)
        self.records = to_builtin(records)
        if aggregates is None:
            aggregates = aggregate(kind, self.records, self.config)
        self.aggregates = aggregates
        self.tool_version = tool_version

    def check(self):
        """Raise ReportError if the aggregates do not match the records."""
        computed = aggregate(self.kind, self.records, self.config)
        mismatches = _differences(self.aggregates, computed)
        if mismatches:
            raise ReportError('Report aggregates disagree with its records '
                              'at {}.'.format(', '.join(mismatches)))
        return self

    def to_json(self):
        return {'schema_version': SCHEMA_VERSION, 'kind': self.kind,
                'tool_version': self.tool_version, 'config': self.config,
                'seeds': self.seeds, 'records': self.records,
                'aggregates': self.aggregates}

    def write(self, path):
        write_json(self.to_json(), path)

    @classmethod
    def from_json(cls, data):
        try:
            if data['schema_version'] != SCHEMA_VERSION:
                raise ReportError('Unsupported report schema version {}.'
                                  .format(data['schema_version']))
            report = cls(data['kind'], data['config'], data['seeds'],
                         data['records'], data['aggregates'],
                         data['tool_version'])
        except (KeyError, TypeError) as error:
            raise ReportError('Invalid report: missing {}.'.format(error))
        return report.check()

    @classmethod
    def load(cls, path):
        return cls.from_json(read_json(path))

    def curves(self):
        """
        Plot data as a DataFrame.

        mma: accuracy per threshold (overall, standard, rotated, average
        and per rotation angle); pose: fraction of successful pairs below
        each angular error in degrees; vpr: recall per radius.

        """
        a = self.aggregates
        if self.kind == 'mma':
            frame = pandas.DataFrame({'threshold': a['thresholds']})
            for prefix in ('mma', 'mma_verified'):
                if prefix not in a:
                    continue
                for suffix in ('', '_standard', '_rotated', '_average'):
                    frame[prefix + suffix] = a[prefix + suffix]
                for theta, values in sorted(
                        a[prefix + '_per_theta'].items(),
                        key=lambda item: float(item[0])):
                    frame['{}_theta_{}'.format(prefix, theta)] = values
            return frame
        if self.kind == 'pose':
            errors = numpy.array([r['angular_error'] for r in self.records
                                  if not r['failed']], dtype=float)
            fractions = [float(numpy.mean(errors < t)) if len(errors) else 0.0
                         for t in POSE_CURVE_DEGREES]
            return pandas.DataFrame({'degrees': list(POSE_CURVE_DEGREES),
                                     'fraction': fractions})
        radii = sorted(a['recall_at'], key=float)
        return pandas.DataFrame({'radius': [float(r) for r in radii],
                                 'recall': [a['recall_at'][r]
                                            for r in radii]})

    def write_curves(self, path):
        self.curves().to_csv(path, index=False, float_format='%.17g')

    def summary(self):
        """Short human readable lines."""
        a = self.aggregates
        if self.kind == 'mma':
            lines = ['pairs: {} (empty: {})'.format(a['pairs'],
                                                    a['empty_pairs'])]
            for threshold, value in zip(a['thresholds'], a['mma']):
                lines.append('MMA@{:g}px: {:.4f}'.format(threshold, value))
            return lines
        if self.kind == 'pose':
            return ['pairs: {} (failure rate {:.3f})'.format(
                a['pairs'], a['failure_rate']),
                'mean angular error: {}'.format(a['mean_angular_error']),
                'mean translation error: {}'.format(
                    a['mean_translation_error'])]
        lines = ['queries: {} (no candidate: {})'.format(a['queries'],
                                                         a['flagged']),
                 'recall: {:.4f}'.format(a['recall'])]
        for radius in sorted(a['recall_at'], key=float):
            lines.append('recall@{}m: {:.4f}'.format(radius,
                                                      a['recall_at'][radius]))
        return lines
