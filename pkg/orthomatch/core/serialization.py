"""
JSON encoding of geometric values.

Homographies, intrinsics and poses are written as row-major number arrays
under the keys "h", "k", "r" and "t". Floats use Python's shortest
round-trip representation, so decoding restores every value exactly.
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import io
import json
import numpy

# local imports
from orthomatch.errors import FormatError
from orthomatch.core.camera import Intrinsics, Pose
from orthomatch.core.homography import Homography

__all__ = ['homography_to_json', 'homography_from_json',
           'intrinsics_to_json', 'intrinsics_from_json',
           'pose_to_json', 'pose_from_json', 'write_json', 'read_json',
           'to_builtin']


def to_builtin(value):
    """Recursively convert numpy values to JSON-compatible builtins."""
    if isinstance(value, dict):
        return {str(k): to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    if isinstance(value, numpy.ndarray):
        return to_builtin(value.tolist())
    if isinstance(value, numpy.bool_):
        return bool(value)
    if isinstance(value, numpy.integer):
        return int(value)
    if isinstance(value, numpy.floating):
        return float(value)
    return value


def _matrix(data, key, shape):
    try:
        result = numpy.array(data[key], dtype=float)
    except (KeyError, TypeError, ValueError):
        raise FormatError('Missing or invalid "{}" entry.'.format(key))
    if result.size != numpy.prod(shape):
        raise FormatError('"{}" must hold {} numbers.'
                          .format(key, numpy.prod(shape)))
    return result.reshape(shape)


def homography_to_json(homography):
    return {'h': homography.matrix.tolist()}


def homography_from_json(data):
    return Homography(_matrix(data, 'h', (3, 3)))


def intrinsics_to_json(intrinsics):
    return {'k': intrinsics.matrix().tolist()}


def intrinsics_from_json(data):
    return Intrinsics.from_matrix(_matrix(data, 'k', (3, 3)))


def pose_to_json(pose):
    return {'r': pose.rotation.tolist(), 't': pose.translation.tolist()}


def pose_from_json(data):
    return Pose(_matrix(data, 'r', (3, 3)), _matrix(data, 't', (3,)))


def write_json(data, path):
    """
    Write data with sorted keys so that equal content gives equal bytes.

    Floats are written with the shortest repr that reads back to the same
    double (``repr(float)``), not padded to 17 significant digits. Both
    forms are lossless; 0.1 is written as ``0.1``, not
    ``0.10000000000000001``.

    """
    with io.open(path, 'w', encoding='utf-8') as output:
        output.write(json.dumps(to_builtin(data), indent=1, sort_keys=True))
        output.write(u'\n')


def read_json(path):
    try:
        with io.open(path, 'r', encoding='utf-8') as input_stream:
            return json.load(input_stream)
    except ValueError as error:
        raise FormatError('{}: invalid JSON ({}).'.format(path, error))
