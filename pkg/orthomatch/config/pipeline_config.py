"""Module defining the PipelineConfig class."""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
from collections import namedtuple, OrderedDict
import json
import logging
import os

# local imports
from orthomatch.errors import ConfigurationError
from orthomatch.core.serialization import read_json, write_json

__all__ = ['PipelineConfig', 'DetectorConfig', 'DescriptorConfig',
           'EnsembleConfig', 'OrthoConfig', 'RansacConfig',
           'parse_override', 'THREADS_VARIABLE']

logger = logging.getLogger(__name__)

THREADS_VARIABLE = 'ORTHOMATCH_THREADS'


def _integer(low, high=None):
    def check(value):
        if isinstance(value, bool) or not isinstance(value, int):
            return 'must be an integer'
        if value < low or (high is not None and value > high):
            return 'must be in [{}, {}]'.format(low, high or 'inf')
    return check


def _number(low, high=None, low_open=False, high_open=False,
            nullable=False):
    def check(value):
        if value is None and nullable:
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return 'must be a number'
        below = value <= low if low_open else value < low
        above = high is not None and (value >= high if high_open
                                      else value > high)
        if below or above:
            return 'must be in {}{}, {}{}'.format(
                '(' if low_open else '[', low, high or 'inf',
                ')' if high_open or high is None else ']')
    return check


def _choice(*values):
    def check(value):
        if value not in values:
            return 'must be one of {}'.format(', '.join(values))
    return check


def _boolean(value):
    if not isinstance(value, bool):
        return 'must be true or false'


DetectorConfig = namedtuple('DetectorConfig',
                            'max_keypoints nms_radius harris_k sigma')
DescriptorConfig = namedtuple('DescriptorConfig',
                              'head dimension orientation_radius smoothing')
EnsembleConfig = namedtuple('EnsembleConfig', 'keep_fraction collapse_radius')
OrthoConfig = namedtuple('OrthoConfig', 'enabled mode standoff max_side')
RansacConfig = namedtuple('RansacConfig', 'model threshold_px threshold_m '
                          'max_iters confidence')

# section -> (value type, {key: (default, check)})
SCHEMA = OrderedDict([
    ('detector', (DetectorConfig, OrderedDict([
        ('max_keypoints', (2000, _integer(1, 100000))),
        ('nms_radius', (3, _integer(1, 64))),
        ('harris_k', (0.04, _number(0, 0.25, True, True))),
        ('sigma', (1.0, _number(0, 10, low_open=True))),
    ]))),
    ('descriptor', (DescriptorConfig, OrderedDict([
        ('head', ('ensemble', _choice('vanilla', 'robust', 'ensemble'))),
        ('dimension', (128, _integer(64, 4096))),
        ('orientation_radius', (8, _integer(2, 32))),
        ('smoothing', (1.0, _number(0, 5))),
    ]))),
    ('ensemble', (EnsembleConfig, OrderedDict([
        ('keep_fraction', (0.5, _number(0, 1, low_open=True))),
        ('collapse_radius', (0.5, _number(0, 10))),
    ]))),
    ('ortho', (OrthoConfig, OrderedDict([
        ('enabled', (False, _boolean)),
        ('mode', ('depth', _choice('depth', 'ipm'))),
        ('standoff', (None, _number(0, low_open=True, nullable=True))),
        ('max_side', (1024, _integer(16, 8192))),
    ]))),
    ('ransac', (RansacConfig, OrderedDict([
        ('model', ('homography', _choice('homography', 'pose3d', 'none'))),
        ('threshold_px', (3.0, _number(0, low_open=True))),
        ('threshold_m', (0.05, _number(0, low_open=True))),
        ('max_iters', (2000, _integer(1, 10 ** 6))),
        ('confidence', (0.999, _number(0, 1, True, True))),
    ]))),
])
TOP_LEVEL = OrderedDict([
    ('seed', (0, _integer(0))),
    ('workers', (1, _integer(1))),
])


def parse_override(text):
    """
    Parse 'section.key=value'.

    The value is read as JSON, falling back to the bare string, so
    'descriptor.head=robust' and 'ortho.enabled=true' both work.

    Returns
    -------
    path : list of str
        Dotted key split on '.'.
    value : object
        Parsed value.

    """
    if '=' not in text:
        raise ConfigurationError('Invalid override {!r}: expected '
                                 'section.key=value.'.format(text))
    key, raw = text.split('=', 1)
    try:
        value = json.loads(raw)
    except ValueError:
        value = raw
    return key.strip().split('.'), value


class PipelineConfig(object):
    """
    Validated pipeline parameters.

    Attributes
    ----------
    detector : DetectorConfig
    descriptor : DescriptorConfig
    ensemble : EnsembleConfig
    ortho : OrthoConfig
    ransac : RansacConfig
    seed : int
        Seed of every random choice of the pipeline.
    workers : int
        Requested number of workers.

    """

    def __init__(self, data=None, overrides=()):
        """
        Build from a (possibly partial) nested mapping.

        Parameters
        ----------
        data : dict, optional
            Sections and top-level keys; missing keys take their default.
        overrides : iterable of str
            'section.key=value' strings applied after data.

        Raises
        ------
        ConfigurationError
            Listing every unknown key and every invalid value.

        """
        merged = {name: {} for name in SCHEMA}
        problems = []
        data = {} if data is None else data
        if not isinstance(data, dict):
            raise ConfigurationError('Configuration must be a JSON object.')
        for name, value in data.items():
            if name in TOP_LEVEL:
                merged[name] = value
            elif name in SCHEMA:
                if not isinstance(value, dict):
                    problems.append('{}: section must be an object'
                                    .format(name))
                    continue
                merged[name].update(value)
            else:
                problems.append('{}: unknown key'.format(name))
        for text in overrides:
            path, value = parse_override(text)
            if len(path) == 1 and path[0] in TOP_LEVEL:
                merged[path[0]] = value
            elif len(path) == 2 and path[0] in SCHEMA:
                merged[path[0]][path[1]] = value
            else:
                problems.append('{}: unknown key'.format('.'.join(path)))

        for name, (value_type, keys) in SCHEMA.items():
            values = []
            for key in merged[name]:
                if key not in keys:
                    problems.append('{}.{}: unknown key'.format(name, key))
            for key, (default, check) in keys.items():
                value = merged[name].get(key, default)
                error = check(value)
                if error:
                    problems.append('{}.{}: {}, got {!r}'.format(
                        name, key, error, value))
                values.append(value)
            setattr(self, name, value_type(*values))
        for name, (default, check) in TOP_LEVEL.items():
            value = merged.get(name, default)
            error = check(value)
            if error:
                problems.append('{}: {}, got {!r}'.format(name, error,
                                                         value))
            setattr(self, name, value)
        if problems:
            raise ConfigurationError('Invalid configuration:\n  {}'
                                     .format('\n  '.join(problems)))

    @classmethod
    def from_file(cls, path, overrides=()):
        try:
            data = read_json(path)
        except (IOError, OSError) as error:
            raise ConfigurationError('Cannot read configuration {}: {}'
                                     .format(path, error))
        return cls(data, overrides)

    def to_json(self):
        result = OrderedDict()
        for name in SCHEMA:
            result[name] = dict(getattr(self, name)._asdict())
        for name in TOP_LEVEL:
            result[name] = getattr(self, name)
        return result

    def write(self, path):
        write_json(self.to_json(), path)

    def replace(self, **sections):
        """
        Copy with whole sections or top-level keys replaced, e.g.
        config.replace(descriptor={'head': 'robust'}).
        """
        data = self.to_json()
        for name, value in sections.items():
            if isinstance(value, dict):
                data[name].update(value)
            else:
                data[name] = value
        return PipelineConfig(data)

    def effective_workers(self):
        """Requested workers, capped by ORTHOMATCH_THREADS when set."""
        cap = os.environ.get(THREADS_VARIABLE)
        if not cap:
            return self.workers
        try:
            cap = int(cap)
        except ValueError:
            logger.warning('Ignoring invalid %s=%r.', THREADS_VARIABLE, cap)
            return self.workers
        return max(1, min(self.workers, cap))

    @property
    def heads(self):
        """Descriptor heads computed for the configured head selection."""
        if self.descriptor.head == 'ensemble':
            return ('vanilla', 'robust')
        return (self.descriptor.head,)
