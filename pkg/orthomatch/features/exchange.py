"""
Binary descriptor exchange format.

Layout (little-endian): magic ``OMDS``, u32 version (1), u32 N, u32 D,
then N records of f32 x, f32 y, f32 score, f32 orientation and D f32
descriptor values. Externally computed descriptors (for instance from a
learned network) enter the matching stage through this format.
"""

# python 2/3 compatibility
from __future__ import division, print_function, absolute_import

# global imports
import io
import logging
import numpy

# local imports
from orthomatch.errors import FormatError, InvariantError
from orthomatch.features.keypoint import (
    DescriptorSet, Keypoint, check_bounds
)

__all__ = ['save_descriptors', 'load_external_descriptors', 'MAGIC',
           'VERSION']

logger = logging.getLogger(__name__)

MAGIC = b'OMDS'
VERSION = 1
HEADER = numpy.dtype([('magic', 'S4'), ('version', '<u4'), ('n', '<u4'),
                      ('d', '<u4')])
RENORMALIZE_TOLERANCE = 1e-6
RENORMALIZE_WARNING = 1e-3
TWO_PI = 2.0 * numpy.pi


def _record_type(dimension):
    return numpy.dtype([('x', '<f4'), ('y', '<f4'), ('score', '<f4'),
                        ('orientation', '<f4'),
                        ('vector', '<f4', (dimension,))])


def save_descriptors(descriptors, path):
    """Write a DescriptorSet in the exchange format."""
    header = numpy.zeros(1, dtype=HEADER)
    header[0] = (MAGIC, VERSION, len(descriptors), descriptors.dimension)
    records = numpy.zeros(len(descriptors),
                          dtype=_record_type(descriptors.dimension))
    if len(descriptors):
        records['x'] = descriptors.points[:, 0]
        records['y'] = descriptors.points[:, 1]
        records['score'] = [k.score for k in descriptors.keypoints]
        records['orientation'] = [k.orientation
                                  for k in descriptors.keypoints]
        records['vector'] = descriptors.vectors
    with io.open(path, 'wb') as output:
        output.write(header.tobytes())
        output.write(records.tobytes())


def load_external_descriptors(path, image_size=None, name=None):
    """
    Read a descriptor file.

    Vectors are renormalized when their norm is off by more than 1e-6;
    a deviation above 1e-3 is logged as a warning and recorded in
    ``max_norm_deviation``.

    Parameters
    ----------
    path : str
        File path.
    image_size : tuple, optional
        (width, height) of the described image, for bounds checks.
    name : str, optional
        Image identifier; defaults to the path.

    Returns
    -------
    DescriptorSet
        Set with head 'external'.

    Raises
    ------
    FormatError
        On bad magic, version, dimension or truncated content.
    InvariantError
        On NaN values or keypoints outside the image.

    """
    with io.open(path, 'rb') as input_stream:
        content = input_stream.read()
    if len(content) < HEADER.itemsize:
        raise FormatError('{}: truncated header.'.format(path))
    header = numpy.frombuffer(content[:HEADER.itemsize], dtype=HEADER)[0]
    if header['magic'] != MAGIC:
        raise FormatError('{}: bad magic {!r}.'.format(path, header['magic']))
    if header['version'] != VERSION:
        raise FormatError('{}: unsupported version {}.'
                          .format(path, header['version']))
    count, dimension = int(header['n']), int(header['d'])
    if dimension == 0:
        raise FormatError('{}: descriptor dimension is 0.'.format(path))
    record = _record_type(dimension)
    body = content[HEADER.itemsize:]
    if len(body) != count * record.itemsize:
        raise FormatError('{}: expected {} bytes of records, found {}.'
                          .format(path, count * record.itemsize, len(body)))
    records = numpy.frombuffer(body, dtype=record)
    vectors = records['vector'].astype(float).reshape(count, dimension)
    for field in ('x', 'y', 'score', 'orientation'):
        if not numpy.all(numpy.isfinite(records[field])):
            raise InvariantError('{}: non-finite {} values.'
                                 .format(path, field))
    if not numpy.all(numpy.isfinite(vectors)):
        raise InvariantError('{}: non-finite descriptor values.'.format(path))
    keypoints = [Keypoint(r['x'], r['y'], r['score'],
                          float(r['orientation']) % TWO_PI) for r in records]
    if image_size is not None:
        check_bounds(keypoints, image_size[0], image_size[1], path)
    vectors, deviation = _renormalize(vectors, path)
    return DescriptorSet(keypoints, vectors, 'external',
                         path if name is None else name, dimension,
                         max_norm_deviation=deviation)


def _renormalize(vectors, path):
    if len(vectors) == 0:
        return vectors, 0.0
    norms = numpy.linalg.norm(vectors, axis=1)
    if numpy.any(norms == 0):
        raise InvariantError('{}: zero descriptor vector.'.format(path))
    deviations = numpy.abs(norms - 1.0)
    deviation = float(deviations.max())
    if deviation > RENORMALIZE_WARNING:
        logger.warning('%s: descriptors renormalized (max norm deviation '
                       '%.3g).', path, deviation)
    off = deviations > RENORMALIZE_TOLERANCE
    vectors[off] /= norms[off, None]
    return vectors, deviation
